import math

import numpy as np
import pytest

from semiodm.errors import ModelUnsupported, QuadratureNotConverged
from semiodm.fermi import FermiContext
from semiodm.oracle import (HarmonicOscillator1D, SpectrumSpec, exact_odm, gauss_legendre,
                            hermite_functions, idempotency_defect, particle_number, turning_point)

HO = HarmonicOscillator1D(1.0)


def test_ground_state():
    assert exact_odm(SpectrumSpec.filled(HO, 1), FermiContext(), 0.0, 0.0) == pytest.approx(
        1 / math.sqrt(math.pi), rel=1e-15)


def test_hermite_orthonormal():
    x, w = gauss_legendre(-15, 15, 400)
    phi = hermite_functions(40, x)
    gram = (phi * w) @ phi.T
    assert np.max(np.abs(gram - np.eye(41))) < 1e-12


def test_symmetric_and_units():
    ctx = FermiContext(hbar=0.8, m=1.4, mu=5.0, g=2)
    spec = SpectrumSpec.filled(HarmonicOscillator1D(0.9), 7)
    x = np.linspace(-2, 2, 9)
    A = exact_odm(spec, ctx, x[:, None], x[None, :])
    assert np.array_equal(A, A.T)
    L = 2 * turning_point(spec, ctx)
    assert particle_number(lambda t: exact_odm(spec, ctx, t, t), -L, L, endpoint_map=False) == pytest.approx(14, abs=1e-8)


def test_filling_from_mu():
    ctx = FermiContext(mu=20.5)
    half = SpectrumSpec.from_chemical_potential(HO, ctx)
    assert half.n_occupied == 20 and half.occupations[-1] == 0.5
    assert SpectrumSpec.from_chemical_potential(HO, ctx, at_mu="exclude").n_levels == 20
    assert SpectrumSpec.from_chemical_potential(HO, ctx, at_mu="include").n_occupied == 21
    assert SpectrumSpec.from_chemical_potential(HO, FermiContext(mu=20.0)).n_occupied == 20


def test_exact_projector():
    ctx = FermiContext(mu=20.5)
    spec = SpectrumSpec.filled(HO, 20)
    L = 2 * turning_point(HO, ctx)
    pts = np.linspace(-3, 3, 31)
    assert idempotency_defect(lambda a, b: exact_odm(spec, ctx, a, b), -L, L, pts) <= 1e-7


def test_half_filled_level_is_not_a_projector():
    ctx = FermiContext(mu=20.5)
    spec = SpectrumSpec.from_chemical_potential(HO, ctx)
    L = 2 * turning_point(HO, ctx)
    pts = np.linspace(-3, 3, 31)
    assert idempotency_defect(lambda a, b: exact_odm(spec, ctx, a, b), -L, L, pts) > 1e-3


def test_quadrature_check_raises():
    with pytest.raises(QuadratureNotConverged):
        particle_number(lambda x: np.cos(40 * x), 0.0, 10.0, n_nodes=16, endpoint_map=False)


def test_free_gas_box_count():
    k, L = 2.0, 3.0
    assert particle_number(lambda x: np.full_like(x, k / math.pi), 0.0, L) == pytest.approx(k * L / math.pi, rel=1e-13)


def test_unsupported():
    with pytest.raises(ModelUnsupported):
        exact_odm(SpectrumSpec.filled(HO, 2), FermiContext(d=2), 0.0, 0.0)
