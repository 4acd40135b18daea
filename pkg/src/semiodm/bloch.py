"""Bloch-matrix route to the density-matrix kernels.

The second-order Bloch matrix ``C = C0 + C1 + C2`` divided by ``beta`` is a
short sum of terms ``c * beta^(-d/2 - xi) * exp(-m s^2 / (2 hbar^2 beta) -
beta V)`` with ``xi`` in {1, 0, -1, -2}. Each one inverts in closed form:

    L^-1_mu { beta^(-d/2 - xi) exp(-m s^2/(2 hbar^2 beta) - beta V) }
        = (hbar^4 k^2 / (m^2 s^2))^(nu/2) J_nu(k s),   nu = d/2 + xi - 1
        = (hbar^2 k^2 / m)^nu S_nu(k s)

with ``k`` the local Fermi wavenumber and ``S_nu = J_nu(z)/z^nu``.

Three independent checks live here: Gauss-Hermite momentum quadrature of the
defining integrals (against the closed Gaussian forms), the analytic
inversion (against the kernels in :mod:`semiodm.odm`), and a fixed-Talbot
contour inversion in extended precision (against the analytic inversion).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import mpmath
import numpy as np

from .errors import (ContourNotConverged, DegenerateSeparation, DomainError,
                     NonpositiveSeparation, QuadratureNotConverged)
from .fermi import FermiContext, sample
from .odm import OdmBreakdown, PairPoint, SymmetricPoint
from .potentials import Potential
from .special import MAX_ORDER, scaled_bessel

XI_RANGE = (-8.0, 8.0)
IMAG_TOL = 1e-14
QUAD_RTOL = 1e-8
TALBOT_RTOL = 1e-6
TALBOT_MAX_Z = 20.0


@dataclass(frozen=True)
class BlochSample:
    beta: float
    c0: float
    c1: float
    c2: float
    # largest |Im C_n| relative to max |C_n| (quadrature only)
    imag_residual: float = 0.0


@dataclass(frozen=True)
class BlochTerm:
    """One ``coeff * beta^(-d/2 - xi) * exp(...)`` piece of C_order / beta."""

    order: int
    coeff: np.ndarray
    xi: int
    label: str = ""


@dataclass(frozen=True)
class _Local:
    """V and its derivatives at the expansion point."""

    v: np.ndarray
    grad: np.ndarray
    hess: np.ndarray
    s: np.ndarray

    @classmethod
    def at(cls, V: Potential, x, s):
        x = np.asarray(x, dtype=float)
        return cls(np.asarray(V.eval(x)), V.gradient(x), V.hessian(x), np.asarray(s, dtype=float))

    @property
    def Gs(self):
        return np.einsum("...i,...i->...", self.grad, self.s)

    @property
    def GG(self):
        return np.einsum("...i,...i->...", self.grad, self.grad)

    @property
    def lap(self):
        return np.trace(self.hess, axis1=-2, axis2=-1)

    @property
    def sHs(self):
        return np.einsum("...i,...ij,...j->...", self.s, self.hess, self.s)


def _prefactor(ctx: FermiContext) -> float:
    """g (m / (2 pi hbar^2))^(d/2)."""
    return ctx.g * (ctx.m / (2.0 * math.pi * ctx.hbar**2)) ** (ctx.d / 2.0)


def _order2_terms(ctx, loc: _Local, P, tag="") -> List[BlochTerm]:
    hb2m = ctx.hbar**2 / ctx.m
    return [
        BlochTerm(2, -P * hb2m * loc.lap / 12.0, -1, tag + "lap"),
        BlochTerm(2, P * hb2m * loc.GG / 24.0, -2, tag + "grad_sq"),
        BlochTerm(2, P * loc.Gs**2 / 8.0, -1, tag + "grad_s_sq"),
        BlochTerm(2, -P * loc.sHs / 6.0, 0, tag + "hess_ss"),
    ]


def _pair_terms(ctx, loc: _Local) -> List[BlochTerm]:
    P = _prefactor(ctx)
    return [
        BlochTerm(0, P * np.ones_like(loc.v), 1, "tf"),
        BlochTerm(1, 0.5 * P * loc.Gs, 0, "grad_s"),
    ] + _order2_terms(ctx, loc, P)


def bloch_terms(ctx: FermiContext, V: Potential, p: PairPoint) -> List[BlochTerm]:
    """beta-power decomposition of C_n(r, r'; beta) / beta, gradients at r."""
    return _pair_terms(ctx, _Local.at(V, p.r, p.r - p.r_prime))


def symmetric_bloch_terms(ctx: FermiContext, V: Potential, q: SymmetricPoint) -> List[BlochTerm]:
    """Same decomposition in (R, s) with V(R + s/2) expanded to second order
    about R.

    With ``a = (grad V . s)/2`` and ``b = s H s / 8`` the zeroth-order
    exponential gives ``X_a, X_b, X_c`` from ``1 - beta (a + b) + beta^2 a^2/2``;
    the first-order term gives ``Y_a, Y_b, Y_c`` from expanding
    ``grad V(R + s/2) . s`` and the exponential once more. Labels follow
    that split; order-2 pieces are taken at R directly.
    """
    loc = _Local.at(V, q.R, q.s)
    P = _prefactor(ctx)
    a = 0.5 * loc.Gs
    b = loc.sHs / 8.0
    return [
        BlochTerm(0, P * np.ones_like(loc.v), 1, "X_a"),
        BlochTerm(0, -P * (a + b), 0, "X_b"),
        BlochTerm(0, 0.5 * P * a**2, -1, "X_c"),
        BlochTerm(1, 0.5 * P * loc.Gs, 0, "Y_a"),
        BlochTerm(1, -0.5 * P * loc.Gs * a, -1, "Y_b"),
        BlochTerm(1, 0.25 * P * loc.sHs, 0, "Y_c"),
    ] + _order2_terms(ctx, loc, P, tag="Z_")


def _check_beta(beta):
    beta = float(beta)
    if not beta > 0 or not math.isfinite(beta):
        raise DomainError(f"beta must be positive and finite, got {beta}")
    return beta


def bloch_closed(ctx: FermiContext, V: Potential, p: PairPoint, beta: float) -> BlochSample:
    """C0, C1, C2 at (r, r'; beta) from the Gaussian moment closed forms."""
    beta = _check_beta(beta)
    s = p.r - p.r_prime
    loc = _Local.at(V, p.r, s)
    s2 = np.einsum("...i,...i->...", s, s)
    env = np.exp(-ctx.m * s2 / (2.0 * ctx.hbar**2 * beta) - beta * loc.v)
    c = [0.0, 0.0, 0.0]
    for t in _pair_terms(ctx, loc):
        c[t.order] = c[t.order] + t.coeff * beta ** (1.0 - ctx.d / 2.0 - t.xi) * env
    return BlochSample(beta, *(_real(x) for x in c))


def _real(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _w_terms(ctx, loc: _Local, beta, p):
    """w1 and the four pieces of w2 at momenta ``p`` (complex, shape (..., d)).

    The Laplacian piece carries beta^2: that is what the Bloch equation gives
    and what reproduces the known -hbar^2 beta^2 lap V / (12 m) density
    correction.
    """
    m = ctx.m
    pg = p @ loc.grad
    pHp = np.einsum("...i,ij,...j->...", p, loc.hess, p)
    w1 = -(1j * beta**2 / (2.0 * m)) * pg
    w2 = (
        -beta**2 / (4.0 * m) * loc.lap + 0.0 * pg,
        beta**3 / (6.0 * m) * loc.GG + 0.0 * pg,
        beta**3 / (6.0 * m**2) * pHp,
        -beta**4 / (8.0 * m**2) * pg**2,
    )
    return w1, w2


def bloch_quadrature_local(ctx: FermiContext, v, grad, hess, s, beta, n_nodes=48, sign=1):
    """Momentum-space Gauss-Hermite evaluation of C0, C1 and the four w2
    pieces of C2 for given local derivatives of V (single point).

    ``sign = -1`` evaluates the reflected form with phase exp(-i p.s/hbar)
    and w(-p); it must agree with ``sign = +1``.

    Returns complex ``(c0, c1, (c2_lap, c2_grad_sq, c2_pHp, c2_pg_sq))``.
    """
    d = ctx.d
    if d > 3:
        raise DomainError("momentum quadrature is limited to d <= 3")
    beta = _check_beta(beta)
    s = np.asarray(s, dtype=float).reshape(d)
    loc = _Local(np.asarray(float(v)), np.asarray(grad, dtype=float).reshape(d),
                 np.asarray(hess, dtype=float).reshape(d, d), s)
    m, hbar = ctx.m, ctx.hbar
    t, wt = np.polynomial.hermite.hermgauss(int(n_nodes))
    scale = math.sqrt(2.0 * m / beta)
    c = scale * s / hbar
    # p = scale*u; exp(-u^2 + i sign c.u) = exp(-c^2/4) exp(-(u - i sign c/2)^2)
    axes = [scale * (t + 0.5j * sign * c[i]) for i in range(d)]
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wts = np.ones(1)
    for _ in range(d):
        wts = np.multiply.outer(wts, wt).ravel()
    w1, w2 = _w_terms(ctx, loc, beta, sign * pts)
    norm = ctx.g / (2.0 * math.pi * hbar) ** d * scale**d
    env = math.exp(-float(c @ c) / 4.0 - beta * float(v))
    base = norm * env
    c0 = base * np.sum(wts) + 0j
    c1 = base * hbar * np.sum(wts * w1)
    c2 = tuple(base * hbar**2 * np.sum(wts * piece) for piece in w2)
    return c0, c1, c2


def bloch_quadrature(ctx: FermiContext, V: Potential, p: PairPoint, beta: float,
                     n_nodes: int = 48, sign: int = 1, check: bool = True) -> BlochSample:
    """C0, C1, C2 by direct momentum integration (d <= 3).

    With ``check`` the node count is doubled and QuadratureNotConverged is
    raised if any C_n moves by more than 1e-8 relative.
    """
    if n_nodes < 16:
        raise DomainError("n_nodes must be at least 16")
    s = p.r - p.r_prime
    if s.ndim != 1:
        raise DomainError("bloch_quadrature takes a single point")
    args = (ctx, V.eval(p.r), V.gradient(p.r), V.hessian(p.r), s, beta)

    def run(n):
        c0, c1, c2 = bloch_quadrature_local(*args, n_nodes=n, sign=sign)
        return np.array([c0, c1, sum(c2)])

    vals = run(n_nodes)
    scale = max(np.max(np.abs(vals)), np.finfo(float).tiny)
    if check:
        again = run(2 * n_nodes)
        floor = 1e-14 * abs(vals[0])
        if np.any(np.abs(again - vals) > QUAD_RTOL * np.maximum(np.abs(again), floor)):
            raise QuadratureNotConverged(
                f"momentum quadrature not converged at {n_nodes} nodes per axis")
    imag = float(np.max(np.abs(vals.imag)) / scale)
    if imag > IMAG_TOL:
        raise QuadratureNotConverged(f"Bloch matrix has imaginary part {imag:.2e} (relative)")
    return BlochSample(float(beta), *(float(x) for x in vals.real), imag_residual=imag)


def _kernel(ctx: FermiContext, kF, s_norm, xi):
    """(hbar^2 k^2 / m)^nu S_nu(k s) with nu = d/2 + xi - 1; finite at s = 0."""
    nu = ctx.d / 2.0 + xi - 1.0
    kF = np.asarray(kF, dtype=float)
    return (ctx.hbar**2 * kF**2 / ctx.m) ** nu * scaled_bessel(nu, kF * s_norm)


def inverse_laplace_kernel(ctx: FermiContext, kF, s_norm, xi):
    """Inverse Laplace transform in mu of
    ``beta^(-d/2 - xi) exp(-m s^2/(2 hbar^2 beta) - beta V)``, i.e.
    ``(hbar^4 k^2 / (m^2 s^2))^(nu/2) J_nu(k s)`` with ``nu = d/2 + xi - 1``.

    Evaluated through the scaled Bessel kernel, which is the same quantity
    without the cancelling powers of ``s``.
    """
    xi = float(xi)
    if not (XI_RANGE[0] <= xi <= XI_RANGE[1]) or abs(ctx.d / 2.0 + xi - 1.0) > MAX_ORDER:
        raise DomainError(f"xi = {xi} outside the supported range {XI_RANGE}")
    s_norm = np.asarray(s_norm, dtype=float)
    if np.any(s_norm <= 0):
        raise NonpositiveSeparation("separation must be positive")
    if np.any(np.asarray(kF) <= 0):
        raise DomainError("kF must be positive")
    out = _kernel(ctx, kF, s_norm, xi)
    return float(out) if np.ndim(out) == 0 else out


def _invert(ctx, terms, kF, s_norm):
    out = [0.0, 0.0, 0.0]
    for t in terms:
        out[t.order] = out[t.order] + t.coeff * _kernel(ctx, kF, s_norm, t.xi)
    return out


def laplace_route_odm(ctx: FermiContext, V: Potential, p: PairPoint, eps_allowed=None,
                      allow_diagonal: bool = False) -> OdmBreakdown:
    """A0, A1, A2 as inverse Laplace transforms of C_n / beta (gradients at r).

    Like the non-symmetric kernel this refuses r == r' unless
    ``allow_diagonal`` is set, in which case the s -> 0 limit is returned.
    """
    s = p.r - p.r_prime
    s_norm = np.linalg.norm(s, axis=-1)
    if not allow_diagonal and np.any(s_norm == 0.0):
        raise DegenerateSeparation("laplace_route_odm needs r != r'")
    kF = sample(ctx, V, p.r, eps_allowed).kF
    return OdmBreakdown.from_orders(*_invert(ctx, bloch_terms(ctx, V, p), kF, s_norm))


def symmetric_wk_split(ctx: FermiContext, V: Potential, q: SymmetricPoint, eps_allowed=None) -> dict:
    """Inverted value of every labelled piece of the symmetric route."""
    kF = sample(ctx, V, q.R, eps_allowed).kF
    s_norm = np.linalg.norm(q.s, axis=-1)
    return {t.label: _real(t.coeff * _kernel(ctx, kF, s_norm, t.xi))
            for t in symmetric_bloch_terms(ctx, V, q)}


def symmetric_wk_odm(ctx: FermiContext, V: Potential, q: SymmetricPoint, eps_allowed=None) -> OdmBreakdown:
    """B0, B1, B2 of the symmetric Wigner-Kirkwood route."""
    kF = sample(ctx, V, q.R, eps_allowed).kF
    s_norm = np.linalg.norm(q.s, axis=-1)
    return OdmBreakdown.from_orders(*_invert(ctx, symmetric_bloch_terms(ctx, V, q), kF, s_norm))


def _talbot(F, t, M):
    """Fixed-Talbot inversion of F at t > 0 with M nodes (mpmath numbers)."""
    M = int(M)
    r = mpmath.mpf(2 * M) / (5 * t)
    total = 0.5 * mpmath.exp(r * t) * F(r)
    for k in range(1, M):
        theta = k * mpmath.pi / M
        cot = mpmath.cot(theta)
        S = r * theta * (cot + 1j)
        sigma = theta + (theta * cot - 1) * cot
        total += mpmath.exp(t * S) * F(S) * (1 + 1j * sigma)
    return (r / M) * mpmath.re(total)


def _talbot_dps(M):
    # the alternating contour sum loses about 0.6 M digits
    return max(30, int(0.7 * M) + 6)


def numeric_bromwich_check(ctx: FermiContext, V: Potential, p: PairPoint, order: int,
                           M: int = 64, eps_allowed=None) -> float:
    """Invert C_order / beta numerically at mu with a fixed-Talbot contour.

    The factor exp(-beta V(r)) is handled by the shift theorem: the reduced
    transform is inverted at ``t = mu - V(r)``. Repeated at 2M; raises
    ContourNotConverged if the two differ by more than 1e-6 relative.
    """
    if order not in (0, 1, 2):
        raise DomainError("order must be 0, 1 or 2")
    if M < 32:
        raise DomainError("M must be at least 32")
    s = p.r - p.r_prime
    if s.ndim != 1:
        raise DomainError("numeric_bromwich_check takes a single point")
    f = sample(ctx, V, p.r, eps_allowed)
    s_norm = float(np.linalg.norm(s))
    z = float(f.kF) * s_norm
    if z > TALBOT_MAX_Z:
        raise DomainError(f"z = {z:.3g} exceeds the contour contract z <= {TALBOT_MAX_Z}")
    terms = [t for t in bloch_terms(ctx, V, p) if t.order == order]
    t_val = ctx.mu - float(V.eval(p.r))
    d = ctx.d

    def run(M):
        with mpmath.workdps(_talbot_dps(M)):
            a = mpmath.mpf(ctx.m) * mpmath.mpf(s_norm) ** 2 / (2 * mpmath.mpf(ctx.hbar) ** 2)
            pieces = [(mpmath.mpf(float(tm.coeff)), mpmath.mpf(-d) / 2 - tm.xi) for tm in terms]

            def F(b):
                e = mpmath.exp(-a / b)
                return sum(c * b**pw for c, pw in pieces) * e

            return float(_talbot(F, mpmath.mpf(t_val), M))

    v1 = run(M)
    v2 = run(2 * M)
    if abs(v2 - v1) > TALBOT_RTOL * max(abs(v2), np.finfo(float).tiny):
        raise ContourNotConverged(f"Talbot inversion moved by {abs(v2 - v1):.3e} between M={M} and {2 * M}")
    return v2


__all__ = [
    "BlochSample", "BlochTerm", "bloch_terms", "symmetric_bloch_terms", "bloch_closed",
    "bloch_quadrature", "bloch_quadrature_local", "inverse_laplace_kernel",
    "laplace_route_odm", "symmetric_wk_odm", "symmetric_wk_split", "numeric_bromwich_check",
]
