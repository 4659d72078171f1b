"""Two co-rotating components: the solid angle picks up a beating cross term.

The swept area grows linearly with time except for a term proportional to
sin(dw T), so the phase only equals the sum of the two separate loops when the
components have slipped by a whole number of half turns relative to each other.
"""

import math

import numpy as np

from geomphase import FieldTrajectory, RotatingComponent, SpinHalfSystem
from geomphase.perturbation import spinhalf_geometric_phase

spin = SpinHalfSystem(1.0)
c1, c2 = RotatingComponent(0.1, 0.01), RotatingComponent(0.05, 0.012)
both = FieldTrajectory(1.0, (c1, c2))
dw = c2.angular_frequency - c1.angular_frequency


def phase(traj, T):
    return spinhalf_geometric_phase(spin, traj, T).geometric_phase


print(f"phase at T = 100: {phase(both, 100.0):.8f} rad")
print()
print(f"{'dw T / pi':>10} {'combined':>12} {'sum of single loops':>20} {'cross term':>12}")
for x in np.linspace(0, 4, 17):
    T = x * math.pi / dw
    single = phase(FieldTrajectory(1.0, (c1,)), T) + phase(FieldTrajectory(1.0, (c2,)), T)
    comb = phase(both, T)
    print(f"{x:10.2f} {comb:12.6f} {single:20.6f} {comb - single:12.2e}")
print()
print("The cross term goes as sin(dw T): it vanishes whenever dw T is a whole")
print("multiple of pi and changes sign in between.")
