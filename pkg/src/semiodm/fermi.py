"""Local Fermi wavenumber and the derivatives of k_F^2 entering every kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, ForbiddenRegion
from .potentials import Potential

# relative turning-point guard, see default_eps_allowed
EPS_ALLOWED_REL = 1e-8


@dataclass(frozen=True)
class FermiContext:
    """Physical parameters shared by all kernels (natural units by default)."""

    d: int = 1
    hbar: float = 1.0
    m: float = 1.0
    mu: float = 1.0
    g: int = 1

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.d}")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        if not (self.m > 0 and math.isfinite(self.m)):
            raise DomainError(f"mass must be positive, got {self.m}")
        if not math.isfinite(self.mu):
            raise DomainError("mu must be finite")
        if self.g not in (1, 2):
            raise DomainError(f"degeneracy must be 1 or 2, got {self.g}")
        object.__setattr__(self, "d", int(self.d))

    @property
    def two_m_over_hbar2(self) -> float:
        return 2.0 * self.m / self.hbar**2


@dataclass(frozen=True)
class FermiFieldSample:
    """k_F and derivatives of k_F^2 at one point (or a batch, leading axes)."""

    kF: np.ndarray
    grad_kF2: np.ndarray
    lap_kF2: np.ndarray
    hess_kF2: np.ndarray


def default_eps_allowed(ctx: FermiContext, V_at_R):
    """Per-point guard 1e-8 * max(|mu|, |V(R)|)."""
    scale = np.maximum(abs(ctx.mu), np.abs(np.asarray(V_at_R, dtype=float)))
    return EPS_ALLOWED_REL * np.maximum(scale, np.finfo(float).tiny)


def allowed(ctx: FermiContext, V: Potential, R, eps_allowed=None):
    """Boolean mask of points with mu - V(R) >= eps_allowed."""
    v = np.asarray(V.eval(R))
    eps = default_eps_allowed(ctx, v) if eps_allowed is None else eps_allowed
    return ctx.mu - v >= eps


def sample(ctx: FermiContext, V: Potential, R, eps_allowed=None) -> FermiFieldSample:
    """Sample k_F and the k_F^2 derivatives at ``R``.

    Raises ForbiddenRegion if any point has ``mu - V(R) < eps_allowed``.
    """
    if V.d != ctx.d:
        raise DimensionMismatch(f"potential has d={V.d}, context has d={ctx.d}")
    v = np.asarray(V.eval(R), dtype=float)
    if eps_allowed is None:
        eps = default_eps_allowed(ctx, v)
    else:
        eps = float(eps_allowed)
        if not eps > 0:
            raise DomainError("eps_allowed must be positive")
    gap = ctx.mu - v
    short = gap < eps
    if np.any(short):
        i = np.argmax(short)
        raise ForbiddenRegion(
            f"mu - V = {np.ravel(gap)[i]:.6g} below the allowed-region guard "
            f"{np.ravel(np.broadcast_to(eps, gap.shape))[i]:.3g}")
    c = ctx.two_m_over_hbar2
    H = V.hessian(R)
    return FermiFieldSample(
        kF=np.sqrt(c * gap),
        grad_kF2=-c * V.gradient(R),
        lap_kF2=-c * np.trace(H, axis1=-2, axis2=-1),
        hess_kF2=-c * H,
    )


def z_of(sample: FermiFieldSample, s) -> np.ndarray:
    """Dimensionless separation z = k_F |s| (0 on the diagonal)."""
    s = np.asarray(s, dtype=float)
    norm = np.linalg.norm(s, axis=-1) if s.ndim else np.abs(s)
    return sample.kF * norm
