import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special as sp

from semiodm.errors import OrderOutOfRange, DomainError
from semiodm.special import MAX_ORDER, bessel_j, scaled_bessel, scaled_bessel_at_zero


def test_j0_at_origin():
    assert bessel_j(0.0, 0.0) == 1.0


def test_half_order_zero_at_pi():
    assert abs(bessel_j(0.5, math.pi)) < 1e-15


def test_negative_three_halves_at_one():
    assert bessel_j(-1.5, 1.0) == pytest.approx(-1.10250, abs=1e-5)
    closed = math.sqrt(2 / math.pi) * (-math.cos(1.0) - math.sin(1.0))
    assert bessel_j(-1.5, 1.0) == pytest.approx(closed, rel=1e-14)


def test_scaled_limits():
    assert scaled_bessel(0.5, 0.0) == pytest.approx(0.797885, abs=1e-6)
    assert scaled_bessel(0.0, 0.0) == 1.0
    assert scaled_bessel(0.5, 1e-9) == pytest.approx(scaled_bessel_at_zero(0.5), rel=1e-15)


def test_scaled_matches_bessel():
    assert scaled_bessel(1.5, 2.0) == pytest.approx(bessel_j(1.5, 2.0) / 2.0**1.5, rel=1e-12)


@pytest.mark.parametrize("nu", np.arange(-4.0, 6.01, 0.25))
def test_against_mpmath(nu):
    z = np.concatenate([np.linspace(0.05, 3, 20), np.linspace(3, 100, 40)])
    ours = bessel_j(nu, z)
    ref = np.array([float(mpmath.besselj(nu, x)) for x in z])
    env = np.sqrt(2 / (np.pi * z))
    assert np.max(np.abs(ours - ref) / np.maximum(np.abs(ref), 1e-2 * env)) < 1e-12


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5, 7.0, 20.0])
def test_against_scipy(nu):
    z = np.linspace(0.01, 60, 301)
    ref = sp.jv(nu, z)
    env = np.sqrt(2 / (np.pi * z))
    assert np.max(np.abs(bessel_j(nu, z) - ref) / np.maximum(np.abs(ref), 1e-2 * env)) < 1e-12


def test_large_order_accuracy():
    for nu in (-64.0 + 0.5, 40.0, 64.0):
        for z in (1.0, 30.0, 80.0):
            ref = float(mpmath.besselj(nu, z))
            assert bessel_j(nu, z) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_scaled_small_z_branch_is_continuous():
    for nu in (-2.5, -1.0, 0.0, 0.5, 1.5, 3.0):
        a = scaled_bessel(nu, 1e-2 * (1 - 1e-12))
        b = scaled_bessel(nu, 1e-2 * (1 + 1e-12))
        assert a == pytest.approx(b, rel=1e-12)


def test_integer_negative_order_reflection():
    z = np.linspace(0.1, 20, 50)
    for n in (1, 2, 3):
        assert np.allclose(bessel_j(-n, z), (-1) ** n * bessel_j(n, z), rtol=1e-13, atol=1e-16)


def test_order_out_of_range():
    with pytest.raises(OrderOutOfRange):
        bessel_j(MAX_ORDER + 1, 1.0)
    with pytest.raises(DomainError):
        bessel_j(0.5, -1.0)


def test_vectorized_shape():
    z = np.linspace(0, 5, 12).reshape(3, 4)
    assert scaled_bessel(1.5, z).shape == (3, 4)


@settings(max_examples=200, deadline=None)
@given(nu=st.floats(-3.0, 8.0), z=st.floats(0.1, 60.0))
def test_three_term_recurrence(nu, z):
    j0, j1, j2 = (bessel_j(nu + k, z) for k in range(3))
    scale = max(1.0, abs(j0), abs(j2), abs(2 * (nu + 1) / z * j1))
    assert abs(j0 - (2 * (nu + 1) / z * j1 - j2)) <= 1e-12 * scale


@settings(max_examples=100, deadline=None)
@given(nu=st.floats(-2.0, 6.0), z=st.one_of(st.just(0.0), st.floats(1e-6, 30.0)))
def test_scaled_is_bessel_over_power(nu, z):
    if z == 0.0:
        assert scaled_bessel(nu, z) == pytest.approx(scaled_bessel_at_zero(nu), rel=1e-14)
    else:
        ref = mpmath.besselj(nu, z) / mpmath.mpf(z) ** nu
        # near zeros of J_nu compare against the envelope instead
        env = float(mpmath.sqrt(2 / (mpmath.pi * max(z, 1.0))) / mpmath.mpf(z) ** nu)
        assert abs(scaled_bessel(nu, z) - float(ref)) <= 1e-12 * max(abs(float(ref)), 1e-2 * env)
