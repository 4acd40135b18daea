"""Cylindrical Bessel functions of real order.

Only what the density-matrix kernels need: ``J_nu(z)`` for real ``nu`` and
``z >= 0``, and the scaled kernel ``J_nu(z) / z**nu`` which is an entire
function of ``z`` and therefore stays finite on the diagonal ``z = 0``.

Both functions take a scalar order and a scalar or array argument.

Evaluation paths for ``J_nu``:

* ascending series while ``z**2 <= 4 (nu + 1)`` (terms decrease from the
  first one, so the alternating sum loses at most a few bits);
* Miller's backward recurrence otherwise, started well above
  ``max(nu, z)`` and normalised with the Neumann sum
  ``(z/2)**a = sum_k (a + 2k) Gamma(a + k) / k! * J_{a+2k}(z)``;
* negative orders by downward recurrence, seeded with the elementary
  ``J_{1/2}``, ``J_{-1/2}`` pair for half-integers and with the
  non-negative path otherwise. Moving to more negative order follows the
  dominant solution, so the recurrence is stable in that direction.
"""

import math

import numpy as np

from .errors import DomainError, OrderOutOfRange

MAX_ORDER = 64.0

# below this argument scaled_bessel sums its ascending series directly
SCALED_SERIES_SWITCH = 1e-2
SCALED_SERIES_TERMS = 8

_RESCALE_AT = 1e250


def _rgamma(x):
    """1/Gamma(x), zero at the poles."""
    if x <= 0 and x == math.floor(x):
        return 0.0
    if x > 170.0:
        return math.exp(-math.lgamma(x))
    return 1.0 / math.gamma(x)


def _check_order(nu):
    nu = float(nu)
    if not math.isfinite(nu):
        raise DomainError(f"Bessel order must be finite, got {nu}")
    if abs(nu) > MAX_ORDER:
        raise OrderOutOfRange(f"|nu| = {abs(nu)} exceeds {MAX_ORDER}")
    return nu


def _as_argument(z):
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Bessel argument must be finite")
    if np.any(arr < 0):
        raise DomainError("Bessel argument must be non-negative")
    return arr


def _is_int(x):
    return x == math.floor(x)


def _series(nu, z):
    """Ascending series for J_nu, nu >= 0, z > 0 (array)."""
    half = 0.5 * z
    q = half * half
    term = np.exp(nu * np.log(half) - math.lgamma(nu + 1.0))
    total = term.copy()
    for k in range(1, 200):
        term = term * (-q / (k * (k + nu)))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _miller(nu, z):
    """J_nu for nu >= 0 and an array of z > 0 via backward recurrence."""
    a = nu - math.floor(nu)
    n_target = int(round(nu - a))
    zmax = float(np.max(z))
    top = max(n_target, int(zmax)) + 20 + int(math.sqrt(40.0 * max(zmax, n_target, 1.0)))
    if top % 2:
        top += 1

    # normalisation weights c_k for J_{a+2k}
    weights = np.empty(top // 2 + 1)
    if a == 0.0:
        weights[0] = 1.0
        weights[1:] = 2.0
    else:
        weights[0] = math.gamma(a + 1.0)
        ratio = math.gamma(a + 1.0)  # Gamma(a + k) / k! at k = 1
        for k in range(1, len(weights)):
            if k > 1:
                ratio *= (a + k - 1.0) / k
            weights[k] = (a + 2.0 * k) * ratio

    upper = np.zeros_like(z)          # J_{a+n+1}
    cur = np.full_like(z, 1e-30)      # J_{a+n}, arbitrary start at n = top
    norm = weights[top // 2] * cur
    target = np.zeros_like(z)
    if n_target == top:
        target = cur.copy()
    for n in range(top, 0, -1):
        lower = (2.0 * (a + n) / z) * cur - upper
        upper, cur = cur, lower
        m = n - 1
        if m % 2 == 0:
            norm = norm + weights[m // 2] * cur
        if m == n_target:
            target = cur.copy()
        big = np.abs(cur) > _RESCALE_AT
        if np.any(big):
            s = np.where(big, 1.0 / _RESCALE_AT, 1.0)
            cur *= s
            upper *= s
            norm *= s
            target *= s
    return target * np.exp(a * np.log(0.5 * z)) / norm


def _j_nonneg(nu, z):
    out = np.empty_like(z)
    small = z * z <= 4.0 * (nu + 1.0)
    if np.any(small):
        out[small] = _series(nu, z[small])
    if np.any(~small):
        out[~small] = _miller(nu, z[~small])
    return out


def _j_negative(nu, z):
    """J_nu for negative non-integer nu and z > 0."""
    if _is_int(2.0 * nu):
        root = np.sqrt(2.0 / (np.pi * z))
        upper = root * np.sin(z)      # J_{1/2}
        cur = root * np.cos(z)        # J_{-1/2}
        order = -0.5
    else:
        a = nu - math.floor(nu)
        upper = _j_nonneg(a + 1.0, z)
        cur = _j_nonneg(a, z)
        order = a
    while order > nu + 0.25:
        lower = (2.0 * order / z) * cur - upper
        upper, cur = cur, lower
        order -= 1.0
    return cur


def bessel_j(nu, z):
    """Cylindrical Bessel function ``J_nu(z)`` for real order and ``z >= 0``.

    Raises DomainError for ``z < 0`` and for ``z == 0`` with a negative
    non-integer order (where ``J_nu`` diverges), OrderOutOfRange for
    ``|nu| > 64``.
    """
    nu = _check_order(nu)
    zz = _as_argument(z)
    flat = np.atleast_1d(zz).ravel()
    out = np.empty_like(flat)

    at_zero = flat == 0.0
    if np.any(at_zero):
        if nu < 0 and not _is_int(nu):
            raise DomainError(f"J_{nu}(0) diverges for negative non-integer order")
        out[at_zero] = 1.0 if nu == 0 else 0.0
    pos = ~at_zero
    if np.any(pos):
        zp = flat[pos]
        if nu >= 0:
            out[pos] = _j_nonneg(nu, zp)
        elif _is_int(nu):
            n = int(-nu)
            out[pos] = (-1.0) ** n * _j_nonneg(float(n), zp)
        else:
            out[pos] = _j_negative(nu, zp)

    if zz.ndim == 0:
        return float(out[0])
    return out.reshape(zz.shape)


def scaled_bessel_at_zero(nu):
    """Diagonal value ``lim_{z->0} J_nu(z)/z**nu = 1 / (2**nu Gamma(nu+1))``."""
    nu = _check_order(nu)
    return _rgamma(nu + 1.0) * 2.0 ** (-nu)


def scaled_bessel(nu, z):
    """``J_nu(z) / z**nu``, continuous through ``z = 0``.

    The scaled kernel is an entire function of ``z`` for every real order,
    so the ``z = 0`` limit exists for negative orders too (it is zero at
    negative integers).
    """
    nu = _check_order(nu)
    zz = _as_argument(z)
    flat = np.atleast_1d(zz).ravel()
    out = np.empty_like(flat)

    small = flat < SCALED_SERIES_SWITCH
    if np.any(small):
        zs = flat[small]
        q = (0.5 * zs) ** 2
        acc = np.zeros_like(zs)
        # sum from the smallest term up
        for k in range(SCALED_SERIES_TERMS - 1, -1, -1):
            c = (-1.0) ** k * _rgamma(k + nu + 1.0) / math.factorial(k)
            acc += c * q**k
        out[small] = acc * 2.0 ** (-nu)
    big = ~small
    if np.any(big):
        zb = flat[big]
        out[big] = bessel_j(nu, zb) * zb ** (-nu)

    if zz.ndim == 0:
        return float(out[0])
    return out.reshape(zz.shape)
