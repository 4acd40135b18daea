import math

import numpy as np
import pytest

from semiodm.errors import DimensionMismatch, DomainError, ForbiddenRegion
from semiodm.fermi import FermiContext, allowed, sample, z_of
from semiodm.potentials import GaussianWell, IsotropicHarmonic, Zero


def test_free_gas():
    f = sample(FermiContext(mu=2.0), Zero(1), [0.7])
    assert f.kF == pytest.approx(2.0)
    assert np.all(f.grad_kF2 == 0) and f.lap_kF2 == 0


def test_harmonic_sample():
    f = sample(FermiContext(mu=2.0), IsotropicHarmonic(1), [1.0])
    assert f.kF == pytest.approx(math.sqrt(3))
    assert f.grad_kF2[0] == pytest.approx(-2.0)


def test_turning_point_forbidden():
    with pytest.raises(ForbiddenRegion):
        sample(FermiContext(mu=2.0), IsotropicHarmonic(1), [2.0])


def test_z():
    f = sample(FermiContext(mu=2.0), Zero(1), [0.0])
    assert z_of(f, [1.0]) == pytest.approx(2.0)
    assert z_of(f, [0.0]) == 0.0
    f3 = sample(FermiContext(d=2, mu=1.5), Zero(2), [0.0, 0.0])
    assert z_of(f3, np.array([3.0, 4.0]) / 50) == pytest.approx(0.1 * math.sqrt(3))


def test_gradient_consistency_with_units():
    ctx = FermiContext(d=2, hbar=0.7, m=1.9, mu=0.2, g=2)
    V = GaussianWell(2, V0=-1.0, sigma=0.9)
    R = np.array([[0.1, 0.3], [0.4, -0.2]])
    f = sample(ctx, V, R)
    c = 2 * ctx.m / ctx.hbar**2
    assert np.allclose(f.grad_kF2, -c * V.gradient(R), rtol=1e-15)
    assert np.allclose(f.kF, np.sqrt(c * (ctx.mu - V.eval(R))), rtol=1e-15)


def test_context_validation():
    for bad in (dict(d=0), dict(hbar=0.0), dict(m=-1.0), dict(g=3), dict(mu=float("nan"))):
        with pytest.raises(DomainError):
            FermiContext(**bad)


def test_mask_and_mismatch():
    ctx = FermiContext(mu=0.5)
    mask = allowed(ctx, IsotropicHarmonic(1), np.array([[0.0], [0.99], [1.01]]))
    assert mask.tolist() == [True, True, False]
    with pytest.raises(DimensionMismatch):
        sample(ctx, Zero(2), [0.0, 0.0])
