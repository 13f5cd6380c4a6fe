"""Period of the Fowler orbits as a function of energy.

Near the center energy the period approaches 2 pi / sqrt(n - 2); towards
zero energy it grows without bound.  Every circle length above the
threshold therefore carries a nonconstant periodic factor.
"""

import numpy as np

from pseudocyl import fowler

for n in (3, 4, 5, 6):
    ec = fowler.center_energy(n)
    print(f"n = {n}: T1 = {fowler.critical_period(n):.6f}, center energy {ec:.6f}")
    for offset in (1e-8, 0.25, 0.5, 0.9, 0.99):
        E = ec * (1 - offset)
        print(f"    E = {E: .6e}   T = {fowler.period_function(n, E):.8f}")

# Solve for a prescribed length.
orbit = fowler.solve_period(4, 6.0)
print(f"\nn = 4, T = 6: E = {orbit.energy:.12f}, "
      f"u in [{orbit.u_min:.6f}, {orbit.u_max:.6f}]")
try:
    fowler.solve_period(4, 4.0)
except fowler.BelowThreshold as exc:
    print(f"T = 4 refused: {exc}")
print("energy spread along the orbit:", float(np.ptp(orbit.energies())))
