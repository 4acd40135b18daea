import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semiodm.errors import DimensionMismatch, DomainError
from semiodm.potentials import (AnisotropicHarmonic, CentralDifference, Custom, GaussianWell,
                                IsotropicHarmonic, Quartic, Zero, directional_hessian, from_config)


def test_values():
    assert Zero(3).eval([1.0, 2.0, 3.0]) == 0.0
    assert IsotropicHarmonic(1).eval([2.0]) == pytest.approx(2.0)
    assert GaussianWell(1, V0=-1.0, sigma=1.0).eval([0.0]) == -1.0


def test_harmonic_derivatives():
    V = IsotropicHarmonic(1)
    assert V.gradient([1.0])[0] == pytest.approx(1.0)
    assert V.hessian([1.0])[0, 0] == pytest.approx(1.0)
    assert V.laplacian([1.0]) == pytest.approx(1.0)


def test_zero_derivatives():
    V = Zero(2)
    assert np.all(V.gradient([0.3, 1.0]) == 0)
    assert np.all(V.hessian([0.3, 1.0]) == 0)


def test_gaussian_curvature_at_peak():
    V = GaussianWell(1, V0=-1.0, sigma=1.0)
    assert V.gradient([0.0])[0] == 0.0
    assert V.hessian([0.0])[0, 0] == pytest.approx(1.0)


def test_batch_shapes():
    V = GaussianWell(2)
    r = np.zeros((4, 5, 2))
    assert V.eval(r).shape == (4, 5)
    assert V.gradient(r).shape == (4, 5, 2)
    assert V.hessian(r).shape == (4, 5, 2, 2)
    assert IsotropicHarmonic(1).eval(0.5) == pytest.approx(0.125)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        GaussianWell(2).eval([1.0, 2.0, 3.0])


POTS = [
    IsotropicHarmonic(2, omega=1.3, mass=0.7),
    AnisotropicHarmonic((1.0, 2.0, 0.5)),
    Quartic(2, lam=0.3),
    GaussianWell(3, V0=-2.0, sigma=0.8),
]


@pytest.mark.parametrize("V", POTS, ids=lambda V: type(V).__name__)
def test_central_difference_agrees_with_analytic(V):
    from dataclasses import replace
    rng = np.random.default_rng(1)
    fd = replace(V, differentiation=CentralDifference()) if not isinstance(V, IsotropicHarmonic) \
        else IsotropicHarmonic(V.d, V.omega, V.mass, CentralDifference())
    r = rng.uniform(-1.2, 1.2, size=(20, V.d))
    g, gf = V.gradient(r), fd.gradient(r)
    H, Hf = V.hessian(r), fd.hessian(r)
    assert np.max(np.abs(g - gf)) <= 1e-7 * max(1.0, np.max(np.abs(g)))
    assert np.max(np.abs(H - Hf)) <= 1e-5 * max(1.0, np.max(np.abs(H)))
    assert np.allclose(Hf, np.swapaxes(Hf, -1, -2), rtol=0, atol=0)


def test_custom_box_and_modes():
    V = Custom(d=1, func=lambda x: np.cos(x[0]), box=([-2.0], [2.0]))
    assert isinstance(V.differentiation, CentralDifference)
    assert V.gradient([0.5])[0] == pytest.approx(-np.sin(0.5), rel=1e-8)
    assert V.hessian([0.5])[0, 0] == pytest.approx(-np.cos(0.5), rel=1e-6)
    with pytest.raises(DomainError):
        V.eval([3.0])


def test_custom_analytic():
    V = Custom(d=2, func=lambda x: x @ x, grad=lambda x: 2 * x, hess=lambda x: 2 * np.eye(2),
               box=([-1, -1], [1, 1]))
    assert V.laplacian([0.2, 0.1]) == 4.0


def test_from_config():
    V = from_config({"kind": "gaussian_well", "V0": -5, "sigma": 2}, d=2)
    assert V.eval([0.0, 0.0]) == -5.0
    with pytest.raises(ValueError):
        from_config({"kind": "nonsense"}, d=1)
    with pytest.raises(ValueError):
        from_config({"kind": "zero", "typo": 1}, d=1)
    with pytest.raises(DimensionMismatch):
        from_config({"kind": "anisotropic_harmonic", "omegas": [1, 2]}, d=3)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3), st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_directional_hessian_quadratic_form(r, s):
    V = GaussianWell(3, V0=-1.5, sigma=1.1)
    H = V.hessian(r)
    s = np.asarray(s)
    assert directional_hessian(V, r, s) == pytest.approx(s @ H @ s, abs=1e-14)
