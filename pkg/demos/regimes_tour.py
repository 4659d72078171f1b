"""Where the simple limiting forms hold, and how fast they fail.

For each limiting case of the rotating-E (table 1) and rotating-B (table 2)
families, synthesize parameters with a given separation between the energy
scales and compare the closed form to the full second-order expression.
"""

import math

from geomphase.regimes import CASES, classify, relative_deviation, synthesize

print(f"{'case':<18} {'ordering':<34} " + " ".join(f"{'sep ' + format(s, 'g'):>10}" for s in (10, 1e2, 1e3)))
for case in CASES:
    devs = []
    for s in (10, 1e2, 1e3):
        p = synthesize(case, s)
        devs.append(relative_deviation(case, p, 2 * math.pi / p.omega))
    print(f"{case.name:<18} {case.ordering:<34} " + " ".join(f"{d:10.2e}" for d in devs))

print()
p = synthesize(CASES[-1], 1e3)
print(f"classify(synthesize({CASES[-1].name}, 1e3)) -> {classify(p).name}")
print("Each closed form drops the next term in the ratio of neighbouring scales, so")
print("deviations fall as a power of the separation: squared for most cases, cubed")
print("for table 2 case I, and only linearly for table 2 case III.")
