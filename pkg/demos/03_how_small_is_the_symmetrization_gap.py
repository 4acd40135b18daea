"""How fast does the KODM/GVODM difference vanish?

Two scans of |KODM(r, r') - GVODM(R, s)| and of the KODM swap defect
|rho(r, r') - rho(r', r)|:

1. fixed potential, shrinking separation s;
2. fixed separation, potential stretched by a length L.

The first falls only linearly in s: the leading piece pairs one power of s
with a third derivative of V. The second falls like L^-3, so the difference
is third order in gradients, the order the semiclassical expansion drops.
"""

import numpy as np

from semiodm import FermiContext, GaussianWell, IsotropicHarmonic
from semiodm.identities import loglog_slope
from semiodm.verification import swap_defect, symmetrization_difference

ctx = FermiContext(d=1, mu=20.5)
V = IsotropicHarmonic(1)
s = np.logspace(-3, -1, 9)
diff = [symmetrization_difference(ctx, V, 0.3, x) for x in s]
swap = [swap_defect(ctx, V, 0.3, x) for x in s]
print("fixed trap (mu = 20.5, R = 0.3)")
for a, b, c in zip(s, diff, swap):
    print(f"  s = {a:.2e}   |KODM - GVODM| = {b:.3e}   swap defect = {c:.3e}")
print(f"  slopes vs s: {loglog_slope(s, diff):.3f}, {loglog_slope(s, swap):.3f}\n")

ctx = FermiContext(d=1, mu=-0.5)
L = np.logspace(1, 2, 7)
diff = [symmetrization_difference(ctx, GaussianWell(1, -2.0, l), 0.3 * l, 0.5) for l in L]
swap = [swap_defect(ctx, GaussianWell(1, -2.0, l), 0.3 * l, 0.5) for l in L]
print("stretched Gaussian well (V0 = -2, sigma = L, mu = -0.5, R = 0.3 L, s = 0.5)")
for a, b, c in zip(L, diff, swap):
    print(f"  L = {a:7.2f}   |KODM - GVODM| = {b:.3e}   swap defect = {c:.3e}")
print(f"  slopes vs L: {loglog_slope(L, diff):.3f}, {loglog_slope(L, swap):.3f}")
