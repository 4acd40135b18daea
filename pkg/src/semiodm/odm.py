"""Second-order semiclassical one-body density matrix kernels.

Every term has the shape ``g k^(d-n) z^p J_nu(z) / (2 pi z)^(d/2)``. Writing
``J_nu(z) = z^nu S_nu(z)`` with the entire function ``S_nu`` from
:func:`semiodm.special.scaled_bessel`, the powers of ``z`` combine with the
directional factors into polynomials in ``s``:

    z (grad k^2 . s_hat)   = k (grad k^2 . s)
    z^2 (s_hat H s_hat)    = k^2 (s H s)

so no term needs ``s_hat`` and all of them stay finite as ``s -> 0``.

Shorthands used below (all derivatives of k_F^2):
``G`` gradient, ``L`` Laplacian, ``H`` Hessian, ``Gs = G . s``,
``sHs = s^T H s``, ``pre = g / (2 pi)^(d/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeparation, DimensionMismatch
from .fermi import FermiContext, FermiFieldSample, sample
from .potentials import Potential
from .special import scaled_bessel, scaled_bessel_at_zero


@dataclass(frozen=True)
class PairPoint:
    r: np.ndarray
    r_prime: np.ndarray

    def __post_init__(self):
        r = _as_vec(self.r)
        rp = _as_vec(self.r_prime)
        if r.shape[-1] != rp.shape[-1]:
            raise DimensionMismatch("r and r_prime have different dimensions")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "r_prime", rp)


@dataclass(frozen=True)
class SymmetricPoint:
    R: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        R = _as_vec(self.R)
        s = _as_vec(self.s)
        if R.shape[-1] != s.shape[-1]:
            raise DimensionMismatch("R and s have different dimensions")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "s", s)


@dataclass(frozen=True)
class OdmBreakdown:
    """Per-order contributions and their sum (scalars or same-shape arrays)."""

    order0: np.ndarray
    order1: np.ndarray
    order2: np.ndarray
    total: np.ndarray

    @classmethod
    def from_orders(cls, o0, o1, o2) -> "OdmBreakdown":
        o0, o1, o2 = (_squeeze(np.broadcast_to(o, np.broadcast(o0, o1, o2).shape))
                      for o in (o0, o1, o2))
        return cls(o0, o1, o2, _squeeze(np.asarray(o0) + o1 + o2))

    def orders(self):
        return (self.order0, self.order1, self.order2)


def _as_vec(x):
    arr = np.asarray(x, dtype=float)
    return arr.reshape(1) if arr.ndim == 0 else arr


def _squeeze(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x.copy()


def to_symmetric(p: PairPoint) -> SymmetricPoint:
    return SymmetricPoint(0.5 * (p.r + p.r_prime), p.r - p.r_prime)


def to_pair(q: SymmetricPoint) -> PairPoint:
    return PairPoint(q.R + 0.5 * q.s, q.R - 0.5 * q.s)


class _Pieces:
    """Directional factors and scaled kernels for one field sample and s."""

    def __init__(self, ctx: FermiContext, f: FermiFieldSample, s):
        d = ctx.d
        s = np.asarray(s, dtype=float)
        self.d = d
        self.k = f.kF
        self.pre = ctx.g / (2.0 * math.pi) ** (d / 2.0)
        self.Gs = np.einsum("...i,...i->...", f.grad_kF2, s)
        self.sHs = np.einsum("...i,...ij,...j->...", s, f.hess_kF2, s)
        self.GG = np.einsum("...i,...i->...", f.grad_kF2, f.grad_kF2)
        self.L = f.lap_kF2
        self.z = self.k * np.linalg.norm(s, axis=-1)
        self._cache = {}

    def S(self, shift: int):
        """scaled_bessel(d/2 + shift, z); shift in {0, -1, -2, -3}."""
        if shift not in self._cache:
            self._cache[shift] = scaled_bessel(self.d / 2.0 + shift, self.z)
        return self._cache[shift]

    def kp(self, n: int):
        """k_F^(d - n)."""
        return self.k ** (self.d - n)

    # the individual terms, named by the kernel order they carry
    def tf(self):
        return self.pre * self.kp(0) * self.S(0)

    def grad_s(self):
        """k^(d-2) S_{d/2-1} (G.s)."""
        return self.pre * self.kp(2) * self.S(-1) * self.Gs

    def hess_ss(self):
        """k^(d-2) S_{d/2-1} (sHs)."""
        return self.pre * self.kp(2) * self.S(-1) * self.sHs

    def grad_s_sq(self):
        """k^(d-4) S_{d/2-2} (G.s)^2."""
        return self.pre * self.kp(4) * self.S(-2) * self.Gs**2

    def lap(self):
        """k^(d-4) S_{d/2-2} L."""
        return self.pre * self.kp(4) * self.S(-2) * self.L

    def grad_sq(self):
        """k^(d-6) S_{d/2-3} |G|^2."""
        return self.pre * self.kp(6) * self.S(-3) * self.GG

    def a2(self):
        return (self.lap() / 24.0 + self.grad_sq() / 96.0
                + self.grad_s_sq() / 32.0 + self.hess_ss() / 12.0)


def kodm_terms(ctx: FermiContext, V: Potential, p: PairPoint, eps_allowed=None) -> OdmBreakdown:
    """Non-symmetric Kirzhnits terms with every gradient taken at ``r``."""
    s = p.r - p.r_prime
    if np.any(np.linalg.norm(s, axis=-1) == 0.0):
        raise DegenerateSeparation("kodm_terms needs r != r'; use kodm_diagonal")
    t = _Pieces(ctx, sample(ctx, V, p.r, eps_allowed), s)
    return OdmBreakdown.from_orders(t.tf(), -0.25 * t.grad_s(), t.a2())


def gvodm_terms(ctx: FermiContext, V: Potential, q: SymmetricPoint, eps_allowed=None) -> OdmBreakdown:
    """Symmetrized A0, A1, A2 with every gradient taken at the midpoint ``R``."""
    t = _Pieces(ctx, sample(ctx, V, q.R, eps_allowed), q.s)
    o0 = t.tf() + t.grad_s() / 4.0 + t.hess_ss() / 16.0 + t.grad_s_sq() / 32.0
    o1 = -t.grad_s() / 4.0 - t.grad_s_sq() / 16.0 - t.hess_ss() / 8.0
    return OdmBreakdown.from_orders(o0, o1, t.a2())


def gvodm_sum(ctx: FermiContext, V: Potential, q: SymmetricPoint, eps_allowed=None):
    """Collapsed symmetric kernel: the odd terms cancel and the directional
    Hessian keeps weight 1/16 - 1/8 + 1/12 = 1/48."""
    t = _Pieces(ctx, sample(ctx, V, q.R, eps_allowed), q.s)
    out = t.tf() + t.lap() / 24.0 + t.grad_sq() / 96.0 + t.hess_ss() / 48.0
    return _squeeze(out)


def _diagonal(ctx: FermiContext, f: FermiFieldSample):
    d = ctx.d
    k = f.kF
    pre = ctx.g / (2.0 * math.pi) ** (d / 2.0)
    GG = np.einsum("...i,...i->...", f.grad_kF2, f.grad_kF2)
    o0 = pre * k**d * scaled_bessel_at_zero(d / 2.0)
    o2 = pre * (k ** (d - 4) * f.lap_kF2 * scaled_bessel_at_zero(d / 2.0 - 2.0) / 24.0
                + k ** (d - 6) * GG * scaled_bessel_at_zero(d / 2.0 - 3.0) / 96.0)
    return OdmBreakdown.from_orders(o0, np.zeros_like(o0), o2)


def kodm_diagonal_terms(ctx, V, r, eps_allowed=None) -> OdmBreakdown:
    return _diagonal(ctx, sample(ctx, V, _as_vec(r), eps_allowed))


def gvodm_diagonal_terms(ctx, V, R, eps_allowed=None) -> OdmBreakdown:
    # identical formula; kept separate so the two routes can diverge in tests
    return _diagonal(ctx, sample(ctx, V, _as_vec(R), eps_allowed))


def kodm_diagonal(ctx, V, r, eps_allowed=None):
    """Density at ``r`` (s -> 0 limit) of the non-symmetric kernel."""
    return kodm_diagonal_terms(ctx, V, r, eps_allowed).total


def gvodm_diagonal(ctx, V, R, eps_allowed=None):
    """Density at ``R`` (s -> 0 limit) of the symmetric kernel."""
    return gvodm_diagonal_terms(ctx, V, R, eps_allowed).total


def thomas_fermi_kernel(ctx: FermiContext, kF, s):
    """Free-gas kernel g k^d J_{d/2}(z) / (2 pi z)^{d/2} for given k_F."""
    kF = np.asarray(kF, dtype=float)
    z = kF * np.linalg.norm(_as_vec(s), axis=-1)
    pre = ctx.g / (2.0 * math.pi) ** (ctx.d / 2.0)
    return _squeeze(pre * kF**ctx.d * scaled_bessel(ctx.d / 2.0, z))


def thomas_fermi_density(ctx: FermiContext, kF):
    """g k^d / ((4 pi)^{d/2} Gamma(d/2 + 1))."""
    d = ctx.d
    return ctx.g * np.asarray(kF, dtype=float) ** d / (
        (4.0 * math.pi) ** (d / 2.0) * math.gamma(d / 2.0 + 1.0))


def kodm(ctx, V, r, r_prime, eps_allowed=None):
    """Total KODM value at (r, r')."""
    return kodm_terms(ctx, V, PairPoint(r, r_prime), eps_allowed).total


def gvodm(ctx, V, R, s, eps_allowed=None):
    """Total GVODM value at (R, s); finite (the density) at s = 0."""
    return gvodm_sum(ctx, V, SymmetricPoint(R, s), eps_allowed)
