import math

import numpy as np
import pytest

from semiodm.bloch import (bloch_closed, bloch_quadrature, bloch_quadrature_local, bloch_terms,
                           inverse_laplace_kernel, laplace_route_odm, numeric_bromwich_check,
                           symmetric_wk_odm, symmetric_wk_split)
from semiodm.errors import DegenerateSeparation, DomainError, NonpositiveSeparation
from semiodm.fermi import FermiContext
from semiodm.odm import (PairPoint, SymmetricPoint, gvodm_diagonal, gvodm_terms, kodm_terms,
                         thomas_fermi_kernel)
from semiodm.potentials import AnisotropicHarmonic, GaussianWell, IsotropicHarmonic, Zero


def rel(a, b):
    return abs(a - b) / abs(b)


def test_free_gaussian_normalisation():
    for g in (1, 2):
        b = bloch_closed(FermiContext(g=g), Zero(1), PairPoint([0.0], [0.0]), 1.0)
        assert b.c0 == pytest.approx(g / math.sqrt(2 * math.pi), rel=1e-15)
        assert b.c1 == 0 and b.c2 == 0


def test_free_gaussian_integrates_to_g():
    ctx = FermiContext(g=2, hbar=0.8, m=1.7)
    beta = 0.6
    s, w = np.polynomial.legendre.leggauss(200)
    s, w = 8 * s, 8 * w
    c0 = bloch_closed(ctx, Zero(1), PairPoint(np.zeros((200, 1)), -s[:, None]), beta).c0
    assert np.sum(w * c0) == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("beta", [0.2, 0.5, 1.5])
def test_quadrature_matches_closed_form_1d(beta):
    ctx = FermiContext(mu=20.5)
    p = PairPoint([0.3], [0.2])
    a = bloch_closed(ctx, IsotropicHarmonic(1), p, beta)
    b = bloch_quadrature(ctx, IsotropicHarmonic(1), p, beta)
    assert rel(b.c0, a.c0) < 1e-12
    assert rel(b.c1, a.c1) < 1e-9
    assert rel(b.c2, a.c2) < 1e-9
    assert b.imag_residual < 1e-14


@pytest.mark.parametrize("d", [2, 3])
def test_quadrature_matches_closed_form_multid(d):
    ctx = FermiContext(d=d, hbar=0.9, m=1.1, mu=0.5, g=2)
    V = GaussianWell(d, V0=-3.0, sigma=1.2) if d == 2 else AnisotropicHarmonic((1.0, 1.5, 0.7), mass=1.1)
    rng = np.random.default_rng(d)
    r = rng.uniform(-0.5, 0.5, d)
    p = PairPoint(r, r - rng.uniform(-0.4, 0.4, d))
    a = bloch_closed(ctx, V, p, 0.7)
    b = bloch_quadrature(ctx, V, p, 0.7)
    for x, y in ((b.c0, a.c0), (b.c1, a.c1), (b.c2, a.c2)):
        assert rel(x, y) < 1e-9


def test_quadrature_free_gas_exact():
    ctx = FermiContext(mu=1.0)
    p = PairPoint([0.0], [0.4])
    assert rel(bloch_quadrature(ctx, Zero(1), p, 0.8).c0, bloch_closed(ctx, Zero(1), p, 0.8).c0) < 1e-12


def test_reflected_momentum_agrees():
    ctx = FermiContext(mu=20.5)
    p = PairPoint([0.3], [0.2])
    a = bloch_quadrature(ctx, IsotropicHarmonic(1), p, 0.5)
    b = bloch_quadrature(ctx, IsotropicHarmonic(1), p, 0.5, sign=-1)
    for x, y in ((a.c0, b.c0), (a.c1, b.c1), (a.c2, b.c2)):
        assert rel(x, y) < 1e-13


def test_first_order_closed_form():
    # C1 = (1/2) (m / (2 pi hbar^2 beta))^(d/2) g (grad V . s) beta exp(...)
    ctx = FermiContext(mu=20.5)
    x, xp, beta = 0.3, 0.2, 0.5
    s = x - xp
    env = math.exp(-s * s / (2 * beta) - beta * 0.5 * x * x)
    expect = 0.5 * (2 * math.pi * beta) ** -0.5 * x * s * beta * env
    assert bloch_closed(ctx, IsotropicHarmonic(1), PairPoint([x], [xp]), beta).c1 == pytest.approx(expect, rel=1e-14)


def _power(values, betas):
    return np.polyfit(np.log(betas), np.log(np.abs(values)), 1)[0]


# isolating derivative configurations in d = 2: (grad, hess, s, which output, expected power)
ISOLATING = [
    ("c0", np.zeros(2), np.zeros((2, 2)), np.array([0.3, 0.0]), -1.0),
    ("c1", np.array([0.7, 0.0]), np.zeros((2, 2)), np.array([0.3, 0.0]), 0.0),
    ("lap", np.zeros(2), np.eye(2) * 0.8, np.zeros(2), 1.0),
    ("grad_sq", np.array([0.0, 0.9]), np.zeros((2, 2)), np.array([0.3, 0.0]), 2.0),
    ("hess_ss", np.zeros(2), np.diag([0.8, -0.8]), np.array([0.3, 0.0]), 0.0),
]


@pytest.mark.parametrize("what,grad,hess,s,power", ISOLATING, ids=[c[0] for c in ISOLATING])
def test_beta_exponents(what, grad, hess, s, power):
    ctx = FermiContext(d=2, mu=1.0, g=1)
    betas = np.linspace(0.2, 2.0, 9)
    vals = []
    for b in betas:
        c0, c1, c2 = bloch_quadrature_local(ctx, 0.1, grad, hess, s, b, n_nodes=64)
        env = math.exp(-s @ s / (2 * b) - 0.1 * b)
        vals.append({"c0": c0, "c1": c1}.get(what, sum(c2)).real / env)
    assert abs(_power(vals, betas) - power) < 1e-10


def test_inverse_kernel_example():
    ctx = FermiContext(mu=2.0)
    # sqrt(2) * 0.51301 with J_1/2(2) rounded to five digits
    assert inverse_laplace_kernel(ctx, 2.0, 1.0, 1.0) == pytest.approx(0.72550, abs=2e-5)
    assert inverse_laplace_kernel(ctx, 2.0, 1.0, 1.0) == pytest.approx(
        math.sqrt(2) * math.sqrt(2 / (2 * math.pi)) * math.sin(2.0), rel=1e-14)


def test_inverse_kernel_times_prefactor_is_tf():
    ctx = FermiContext(d=3, mu=2.0, g=2)
    pref = ctx.g * (ctx.m / (2 * math.pi * ctx.hbar**2)) ** 1.5
    k = inverse_laplace_kernel(ctx, 2.0, 0.7, 1.0)
    assert pref * k == pytest.approx(thomas_fermi_kernel(ctx, 2.0, [0.7, 0, 0]), rel=1e-14)


def test_inverse_kernel_small_z_finite_and_guarded():
    ctx = FermiContext(d=3, mu=2.0)
    a = inverse_laplace_kernel(ctx, 2.0, 1e-12, 0.0)
    b = inverse_laplace_kernel(ctx, 2.0, 1e-6, 0.0)
    assert np.isfinite(a) and a == pytest.approx(b, rel=1e-10)
    with pytest.raises(NonpositiveSeparation):
        inverse_laplace_kernel(ctx, 2.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        inverse_laplace_kernel(ctx, 2.0, 1.0, 9.0)


def test_laplace_route_equals_kodm():
    ctx = FermiContext(mu=10.5)
    p = PairPoint([0.3], [0.1])
    a = laplace_route_odm(ctx, IsotropicHarmonic(1), p)
    b = kodm_terms(ctx, IsotropicHarmonic(1), p)
    for x, y in zip(a.orders(), b.orders()):
        assert rel(x, y) < 1e-11
    with pytest.raises(DegenerateSeparation):
        laplace_route_odm(ctx, IsotropicHarmonic(1), PairPoint([0.3], [0.3]))


def test_laplace_route_free_gas_and_2d():
    ctx = FermiContext(d=2, mu=0.5, g=2)
    t = laplace_route_odm(ctx, Zero(2), PairPoint([0.1, 0.0], [0.0, 0.4]))
    assert t.order1 == 0 and t.order2 == 0
    V = GaussianWell(2, V0=-3.0, sigma=1.2)
    p = PairPoint([0.4, -0.2], [0.0, 0.3])
    for x, y in zip(laplace_route_odm(ctx, V, p).orders(), kodm_terms(ctx, V, p).orders()):
        assert rel(x, y) < 1e-10


def test_laplace_route_diagonal_opt_in():
    ctx = FermiContext(d=2, mu=0.5, g=2)
    V = GaussianWell(2, V0=-3.0, sigma=1.2)
    t = laplace_route_odm(ctx, V, PairPoint([0.4, -0.2], [0.4, -0.2]), allow_diagonal=True)
    assert t.total == pytest.approx(gvodm_diagonal(ctx, V, [0.4, -0.2]), rel=1e-13)


def test_symmetric_route_equals_symmetrized_terms():
    ctx = FermiContext(d=2, mu=0.5, g=2)
    V = GaussianWell(2, V0=-3.0, sigma=1.2)
    q = SymmetricPoint([[0.3, -0.1], [0.0, 0.5]], [[0.4, 0.2], [-0.7, 0.1]])
    a, b = symmetric_wk_odm(ctx, V, q), gvodm_terms(ctx, V, q)
    for x, y in zip(a.orders(), b.orders()):
        assert np.max(np.abs(x - y) / np.abs(y)) < 1e-10
    split = symmetric_wk_split(ctx, V, q)
    assert set(split) >= {"X_a", "X_b", "X_c", "Y_a", "Y_b", "Y_c"}
    assert np.allclose(sum(split.values()), b.total, rtol=1e-12, atol=0)


def test_symmetric_route_quadratic_potential():
    ctx = FermiContext(mu=20.5)
    q = SymmetricPoint([[0.3], [-1.0]], [[0.5], [0.05]])
    a, b = symmetric_wk_odm(ctx, IsotropicHarmonic(1), q), gvodm_terms(ctx, IsotropicHarmonic(1), q)
    for x, y in zip(a.orders(), b.orders()):
        assert np.max(np.abs(x - y) / np.abs(y)) < 1e-12
    t = symmetric_wk_odm(FermiContext(mu=2.0), Zero(1), SymmetricPoint([0.0], [0.5]))
    assert t.total == pytest.approx(thomas_fermi_kernel(FermiContext(mu=2.0), 2.0, [0.5]), rel=1e-14)


def test_talbot_free_gas():
    ctx = FermiContext(mu=2.0)
    p = PairPoint([0.0], [-0.5])
    assert rel(numeric_bromwich_check(ctx, Zero(1), p, 0), kodm_terms(ctx, Zero(1), p).order0) < 1e-7


def test_talbot_near_diagonal():
    ctx = FermiContext(mu=2.0)
    p = PairPoint([0.0], [-5e-3])
    z = 2.0 * 5e-3
    series = 2 / math.pi * (1 - z**2 / 6 + z**4 / 120)
    assert rel(numeric_bromwich_check(ctx, Zero(1), p, 0), series) < 1e-6


def test_talbot_second_order():
    ctx = FermiContext(mu=10.5)
    p = PairPoint([0.3], [0.25])
    assert rel(numeric_bromwich_check(ctx, IsotropicHarmonic(1), p, 2),
               kodm_terms(ctx, IsotropicHarmonic(1), p).order2) < 1e-5


def test_guards():
    ctx = FermiContext(mu=2.0)
    with pytest.raises(DomainError):
        bloch_closed(ctx, Zero(1), PairPoint([0.0], [0.1]), 0.0)
    with pytest.raises(DomainError):
        numeric_bromwich_check(ctx, Zero(1), PairPoint([0.0], [-11.0]), 0)
    with pytest.raises(DomainError):
        bloch_quadrature_local(FermiContext(d=4), 0.0, np.zeros(4), np.zeros((4, 4)), np.zeros(4), 1.0)


def test_terms_labels():
    labels = {t.label for t in bloch_terms(FermiContext(mu=2.0), IsotropicHarmonic(1), PairPoint([0.1], [0.0]))}
    assert labels == {"tf", "grad_s", "lap", "grad_sq", "grad_s_sq", "hess_ss"}
