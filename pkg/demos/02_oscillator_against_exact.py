"""The 1D harmonic trap against its exact density matrix.

With hbar = m = omega = 1 and mu = 20.5 the trap holds twenty filled levels
(a twenty-first sits exactly at mu and is half filled in the T -> 0 limit).
Thomas-Fermi alone and the full second-order kernel are compared with the
eigenfunction sum, particles are counted, and each kernel is tested for how
far it is from a projector.
"""

import numpy as np

from semiodm import FermiContext, IsotropicHarmonic, SpectrumSpec, HarmonicOscillator1D, exact_odm
from semiodm.odm import gvodm_diagonal_terms
from semiodm.verification import (exact_defect, exact_particle_number, gvodm_defect,
                                  tf_particle_number)

ctx = FermiContext(d=1, mu=20.5)
V = IsotropicHarmonic(1)
spec = SpectrumSpec.from_chemical_potential(HarmonicOscillator1D(1.0), ctx)

x = np.linspace(0.0, 5.5, 12)
ex = exact_odm(spec, ctx, x, x)
t = gvodm_diagonal_terms(ctx, V, x[:, None])
print(f"{'x':>5} {'exact':>10} {'TF':>10} {'TF+2nd':>10}")
for row in zip(x, ex, t.order0, t.total):
    print("{:5.2f} {:10.6f} {:10.6f} {:10.6f}".format(*row))
w = np.linspace(-2.0, 2.0, 401)
exw = exact_odm(spec, ctx, w, w)
tw = gvodm_diagonal_terms(ctx, V, w[:, None])
print("\nthe exact density carries shell oscillations that no smooth kernel")
print("follows; the second-order term is of order 1e-4 here. Over |x| <= 2 the")
print("worst relative error is {:.4e} for TF and {:.4e} with the correction.\n".format(
    np.max(np.abs(tw.order0 - exw) / exw), np.max(np.abs(tw.total - exw) / exw)))

print(f"particle number, TF diagonal:       {tf_particle_number(20.5):.8f}   (mu / hbar omega = 20.5)")
print(f"particle number, 20 exact orbitals: {exact_particle_number(20):.12f}")
print(f"projector defect, exact (N = 20):   {exact_defect(20):.2e}")
for mu in (10.5, 20.5, 30.5, 40.5, 60.5, 80.5):
    print(f"projector defect, GVODM mu = {mu:5.1f}: {gvodm_defect(mu):.4e}")
print("\nthe GVODM defect is not monotone in mu: the y-integral stops a collar")
print("short of the turning points, and the kernel there, where k_F is small")
print("and the second-order terms grow, dominates the defect.")
