"""The Bloch matrix two ways, and back to the density matrix.

C(r, r'; beta) to second order is a short sum of Gaussians times powers of
beta. Here it is computed from those closed forms and, independently, by
Gauss-Hermite integration over momentum of the defining integrals. Then the
zeroth order is inverted numerically with a fixed-Talbot contour and set
against the analytic inverse (a Bessel function).
"""

from semiodm import FermiContext, IsotropicHarmonic, PairPoint, bloch_closed, bloch_quadrature
from semiodm import kodm_terms, numeric_bromwich_check

ctx = FermiContext(d=1, mu=10.5)
V = IsotropicHarmonic(1)
p = PairPoint([0.4], [0.1])

print(f"{'beta':>5} {'C0 closed':>14} {'C0 quad':>14} {'C1 closed':>14} {'C1 quad':>14} {'C2 closed':>14} {'C2 quad':>14}")
for beta in (0.1, 0.3, 1.0, 3.0):
    a = bloch_closed(ctx, V, p, beta)
    b = bloch_quadrature(ctx, V, p, beta)
    print(f"{beta:5.1f} {a.c0:14.10f} {b.c0:14.10f} {a.c1:14.10f} {b.c1:14.10f} {a.c2:14.10f} {b.c2:14.10f}")

for order in (0, 1, 2):
    t = numeric_bromwich_check(ctx, V, p, order)
    ref = kodm_terms(ctx, V, p).orders()[order]
    print(f"order {order}: Talbot {t:.12e}   analytic {float(ref):.12e}")
