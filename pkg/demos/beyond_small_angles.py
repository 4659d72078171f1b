"""Wide cones, where the shift expansion no longer applies.

At Bperp = Bz the field direction sweeps a 45 degree cone. Direct integration
and the exact rotating-frame solution agree, and both approach the exact solid
angle linearly in the rotation frequency.
"""

import math

from geomphase import FieldTrajectory, SpinHalfSystem
from geomphase.evolution import dressed_exact_spinhalf, extract_geometric_phase
from geomphase.fields import solid_angle_exact

spin = SpinHalfSystem(1.0)
print(f"exact solid angle 2 pi (1 - cos 45deg) = {2 * math.pi * (1 - 1 / math.sqrt(2)):.8f}")
print(f"{'w/w0':>8} {'oracle':>12} {'rotating frame':>15} {'minus solid angle':>18}")
for w in (8e-3, 4e-3, 2e-3, 1e-3):
    T = 2 * math.pi / w
    loop = FieldTrajectory.circular(1.0, 1.0, w)
    o = extract_geometric_phase(spin, T, bfield=loop).geometric_difference
    d = dressed_exact_spinhalf(spin, 1.0, 1.0, w, T).geometric_phase
    print(f"{w:8.0e} {o:12.8f} {d:15.8f} {d - solid_angle_exact(loop, T):18.3e}")
print()
print("Halving the rotation frequency halves the residual: the correction is O(w/w0).")
