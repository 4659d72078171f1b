"""A J=1 level with an opposite-parity J=0 partner in a rotating electric field.

Nothing here is a magnetic moment, yet the stretched states |1,+1> and |1,-1>
pick up a phase difference of twice the solid angle traced by the field,
whatever the zero-field splitting and dipole moment.
"""

import math

from geomphase import FieldTrajectory, ParityDoubletSystem
from geomphase.evolution import extract_geometric_phase
from geomphase.perturbation import spin1_efield_shifts
from geomphase.systems import static_mix

ratio = 0.1
print(f"transverse/static field ratio {ratio}: solid angle pi r^2 = {math.pi * ratio**2:.6f}")
print(f"{'B':>6} {'d0':>6} {'Ez':>6} {'xi [deg]':>9} {'phase / cycle':>14} {'/ (2 pi r^2)':>12}")
for B, d0, Ez in [(1.0, 1.0, 0.5), (0.2, 3.0, 2.0), (5.0, 0.5, 0.3), (1.0, 1.0, 10.0)]:
    system = ParityDoubletSystem(B, d0)
    st = static_mix(system, Ez)
    w = 1e-3 * abs(st.delta1)
    T = 2 * math.pi / w
    ph = spin1_efield_shifts(system, Ez, ratio * Ez, w).difference.phases(T).geometric_phase
    print(f"{B:6.2f} {d0:6.2f} {Ez:6.2f} {math.degrees(st.xi):9.2f} {ph:14.8f} {ph / (2 * math.pi * ratio**2):12.9f}")

print()
print("direct integration of the four-level Schroedinger equation, B = d0 = 1, Ez = 0.5:")
w = 2e-3
rep = extract_geometric_phase(ParityDoubletSystem(1.0, 1.0), 2 * math.pi / w,
                              efield=FieldTrajectory.circular(0.5, 0.05, w))
print(f"  phase {rep.geometric_difference:.6f} rad vs 2 pi r^2 = {2 * math.pi * ratio**2:.6f}, "
      f"adiabaticity {rep.adiabaticity:.1e}")
