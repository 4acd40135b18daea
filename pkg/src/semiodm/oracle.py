"""Exact reference for the 1D harmonic oscillator: eigenfunction-sum density
matrix, idempotency defect and particle-number quadratures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, ModelUnsupported, QuadratureNotConverged
from .fermi import FermiContext

LEVEL_TOL = 1e-12


@dataclass(frozen=True)
class HarmonicOscillator1D:
    omega: float = 1.0


@dataclass(frozen=True)
class SpectrumSpec:
    """Occupied levels of the model.

    ``occupations[n]`` is the filling of level n (times the degeneracy g,
    applied at evaluation). ``n_occupied`` counts the fully occupied levels,
    which for the default filling are the levels strictly below mu.
    """

    model: HarmonicOscillator1D
    occupations: tuple

    @property
    def n_occupied(self) -> int:
        return sum(1 for f in self.occupations if f == 1.0)

    @property
    def n_levels(self) -> int:
        return len(self.occupations)

    @classmethod
    def filled(cls, model, n: int) -> "SpectrumSpec":
        """Lowest ``n`` levels fully occupied."""
        if n < 1:
            raise DomainError("need at least one occupied level")
        return cls(model, (1.0,) * int(n))

    @classmethod
    def from_chemical_potential(cls, model, ctx: FermiContext, at_mu: str = "half") -> "SpectrumSpec":
        """Zero-temperature filling for chemical potential ``ctx.mu``.

        Levels below mu are full and levels above are empty. A level sitting
        exactly at mu (relative tolerance 1e-12) gets occupation 1/2, the
        T -> 0 limit of the Fermi function; ``at_mu="exclude"`` or
        ``"include"`` empties or fills it instead.
        """
        if not isinstance(model, HarmonicOscillator1D):
            raise ModelUnsupported(f"unsupported model {model!r}")
        if at_mu not in ("half", "exclude", "include"):
            raise ValueError("at_mu must be 'half', 'exclude' or 'include'")
        quantum = ctx.hbar * model.omega
        x = ctx.mu / quantum - 0.5
        n_top = math.floor(x + LEVEL_TOL * max(1.0, abs(x)))
        on_level = n_top >= 0 and abs(x - n_top) <= LEVEL_TOL * max(1.0, abs(x))
        occ = [1.0] * max(n_top, 0)
        if n_top >= 0:
            if on_level:
                edge = {"half": 0.5, "exclude": None, "include": 1.0}[at_mu]
                if edge is not None:
                    occ.append(edge)
            else:
                occ.append(1.0)
        if not occ:
            raise DomainError("chemical potential below the ground state")
        return cls(model, tuple(occ))


def _check(spec: SpectrumSpec, ctx: FermiContext):
    if not isinstance(spec.model, HarmonicOscillator1D) or ctx.d != 1:
        raise ModelUnsupported("exact oracle supports the 1D harmonic oscillator only")


def hermite_functions(n_max: int, xi) -> np.ndarray:
    """phi_0 .. phi_{n_max} at dimensionless xi (shape (n_max+1,) + xi.shape).

    Uses the three-term recurrence on the normalised functions themselves,
    which stays in range for large n.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty((n_max + 1,) + xi.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * xi * xi)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for n in range(2, n_max + 1):
        out[n] = math.sqrt(2.0 / n) * xi * out[n - 1] - math.sqrt((n - 1.0) / n) * out[n - 2]
    return out


def exact_odm(spec: SpectrumSpec, ctx: FermiContext, x, x_prime):
    """g sum_n f_n phi_n(x) phi_n(x') in physical units (broadcasts x, x')."""
    _check(spec, ctx)
    L = math.sqrt(ctx.hbar / (ctx.m * spec.model.omega))
    x = np.asarray(x, dtype=float)
    xp = np.asarray(x_prime, dtype=float)
    x, xp = np.broadcast_arrays(x, xp)
    n = spec.n_levels - 1
    occ = np.asarray(spec.occupations).reshape((-1,) + (1,) * x.ndim)
    a = hermite_functions(n, x / L)
    b = hermite_functions(n, xp / L)
    out = ctx.g * np.sum(occ * a * b, axis=0) / L
    return float(out) if out.ndim == 0 else out


def _omega(obj) -> float:
    if isinstance(obj, SpectrumSpec):
        obj = obj.model
    return float(getattr(obj, "omega", obj))


def turning_point(model, ctx: FermiContext) -> float:
    """Classical turning point sqrt(2 mu / (m omega^2)); ``model`` may be a
    SpectrumSpec, a HarmonicOscillator1D or a bare omega."""
    omega = _omega(model)
    if ctx.mu <= 0:
        raise DomainError("no classically allowed region for mu <= 0")
    return math.sqrt(2.0 * ctx.mu / (ctx.m * omega**2))


def collar_width(ctx: FermiContext, omega: float, factor: float = 0.5) -> float:
    """factor * (hbar^2 / (m^2 omega kF(0)))^(1/3): the width of the
    turning-point layer excluded from bulk comparisons."""
    kF0 = math.sqrt(2.0 * ctx.m * ctx.mu) / ctx.hbar
    return factor * (ctx.hbar**2 / (ctx.m**2 * omega * kF0)) ** (1.0 / 3.0)


def gauss_legendre(a: float, b: float, n: int):
    t, w = np.polynomial.legendre.leggauss(int(n))
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * t, half * w


def _sine_nodes(a, b, n):
    """Gauss-Legendre in theta with x = c + h sin(theta); clusters nodes at
    the ends and removes square-root endpoint behaviour."""
    th, w = gauss_legendre(-0.5 * math.pi, 0.5 * math.pi, n)
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    return c + h * np.sin(th), w * h * np.cos(th)


def idempotency_defect(evaluator: Callable, a: float, b: float, eval_points,
                       n_nodes: int = 400, check: bool = True, rtol: float = 1e-8,
                       return_matrix: bool = False):
    """max_{i,j} | int_a^b rho(x_i, y) rho(y, x_j) dy - rho(x_i, x_j) |.

    ``evaluator(x, x')`` must broadcast. The y-integral uses ``n_nodes``
    Gauss-Legendre points; with ``check`` it is redone at twice the nodes
    and QuadratureNotConverged is raised if the squared kernel moves by more
    than ``rtol`` times max|rho|.
    """
    x = np.asarray(eval_points, dtype=float).ravel()
    direct = np.asarray(evaluator(x[:, None], x[None, :]))

    def square(n):
        y, w = gauss_legendre(a, b, n)
        left = np.asarray(evaluator(x[:, None], y[None, :]))
        right = np.asarray(evaluator(y[:, None], x[None, :]))
        return (left * w) @ right

    sq = square(n_nodes)
    if check:
        sq2 = square(2 * n_nodes)
        scale = max(float(np.max(np.abs(direct))), np.finfo(float).tiny)
        if np.max(np.abs(sq2 - sq)) > rtol * scale:
            raise QuadratureNotConverged(
                f"idempotency quadrature moved by {np.max(np.abs(sq2 - sq)):.3e} on doubling")
        sq = sq2
    defect = float(np.max(np.abs(sq - direct)))
    return (defect, sq - direct) if return_matrix else defect


def particle_number(diagonal: Callable, a: float, b: float, n_nodes: int = 256,
                    check: bool = True, rtol: float = 1e-10, endpoint_map: bool = True) -> float:
    """int_a^b rho(x, x) dx.

    With ``endpoint_map`` the nodes come from the substitution
    x = c + h sin(theta), which handles densities vanishing like a square
    root at the ends of the classically allowed region.
    """
    nodes = _sine_nodes if endpoint_map else gauss_legendre

    def run(n):
        xs, w = nodes(a, b, n)
        return float(np.sum(w * np.asarray(diagonal(xs))))

    val = run(n_nodes)
    if check:
        val2 = run(2 * n_nodes)
        if abs(val2 - val) > rtol * max(abs(val2), 1.0):
            raise QuadratureNotConverged(
                f"particle number moved by {abs(val2 - val):.3e} on doubling nodes")
        val = val2
    return val


def allowed_interval(ctx: FermiContext, omega: float, collar: Optional[float] = None):
    """(-L, L) with L the turning point minus ``collar`` (default: the tiny
    collar where mu - V drops below 1e-6 mu)."""
    xt = turning_point(omega, ctx)
    if collar is None:
        collar = 1e-6 * xt
    L = xt - collar
    if L <= 0:
        raise DomainError("collar wider than the allowed region")
    return -L, L
