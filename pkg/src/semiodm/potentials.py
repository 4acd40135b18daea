"""External one-body potentials with value, gradient, Hessian and Laplacian.

Every method accepts a single point of shape ``(d,)`` or a batch of shape
``(..., d)``; for ``d == 1`` a bare scalar is also accepted. Return shapes
are ``(...)`` for values and Laplacians, ``(..., d)`` for gradients and
``(..., d, d)`` for Hessians.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Analytic:
    """Use the closed-form derivatives of a built-in potential."""


@dataclass(frozen=True)
class CentralDifference:
    """Second-order central differences.

    ``h1``/``h2`` are the steps for first/second derivatives. ``None``
    selects ``eps**(1/3) (1+|r|)`` and ``eps**(1/4) (1+|r|)``.
    """

    h1: Optional[float] = None
    h2: Optional[float] = None


class Potential:
    """Base class. Subclasses implement ``_value`` and, if they can,
    ``_gradient`` and ``_hessian`` on arrays of shape ``(n, d)``."""

    d: int
    differentiation: object

    def _value(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _gradient(self, r):
        raise NotImplementedError

    def _hessian(self, r):
        raise NotImplementedError

    @property
    def analytic(self) -> bool:
        return isinstance(self.differentiation, Analytic)

    def _points(self, r):
        arr = np.asarray(r, dtype=float)
        if arr.ndim == 0:
            if self.d != 1:
                raise DimensionMismatch(f"scalar point given for d={self.d}")
            arr = arr.reshape(1)
        if arr.shape[-1] != self.d:
            raise DimensionMismatch(
                f"point has {arr.shape[-1]} components, potential has d={self.d}")
        self._check_domain(arr)
        return arr.reshape(-1, self.d), arr.shape[:-1]

    def _check_domain(self, arr):
        pass

    def eval(self, r):
        pts, batch = self._points(r)
        out = np.asarray(self._value(pts), dtype=float).reshape(batch)
        return float(out) if out.ndim == 0 else out

    __call__ = eval

    def gradient(self, r) -> np.ndarray:
        pts, batch = self._points(r)
        if self.analytic:
            g = self._gradient(pts)
        else:
            g = _fd_gradient(self._value, pts, self.differentiation.h1)
        return np.asarray(g, dtype=float).reshape(batch + (self.d,))

    def hessian(self, r) -> np.ndarray:
        pts, batch = self._points(r)
        if self.analytic:
            h = self._hessian(pts)
        else:
            h = _fd_hessian(self._value, pts, self.differentiation.h2)
        return np.asarray(h, dtype=float).reshape(batch + (self.d, self.d))

    def laplacian(self, r):
        lap = np.trace(self.hessian(r), axis1=-2, axis2=-1)
        return float(lap) if np.ndim(lap) == 0 else lap

    def energy_scale(self, r) -> float:
        """Magnitude used to set the turning-point tolerance near ``r``."""
        return float(np.max(np.abs(self.eval(r))))


def _steps(pts, h, power):
    if h is not None:
        return np.full(len(pts), float(h))
    return EPS**power * (1.0 + np.linalg.norm(pts, axis=1))


def _fd_gradient(f, pts, h1):
    n, d = pts.shape
    h = _steps(pts, h1, 1.0 / 3.0)
    out = np.empty((n, d))
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        step = h[:, None] * e
        out[:, i] = (f(pts + step) - f(pts - step)) / (2.0 * h)
    return out


def _fd_hessian(f, pts, h2):
    n, d = pts.shape
    h = _steps(pts, h2, 0.25)
    f0 = f(pts)
    out = np.empty((n, d, d))
    basis = np.eye(d)
    for i in range(d):
        ei = h[:, None] * basis[i]
        out[:, i, i] = (f(pts + ei) - 2.0 * f0 + f(pts - ei)) / h**2
        for j in range(i):
            ej = h[:, None] * basis[j]
            mixed = (f(pts + ei + ej) - f(pts + ei - ej)
                     - f(pts - ei + ej) + f(pts - ei - ej)) / (4.0 * h**2)
            out[:, i, j] = mixed
            out[:, j, i] = mixed
    return out


@dataclass(frozen=True)
class Zero(Potential):
    d: int = 1
    differentiation: object = field(default_factory=Analytic)

    def _value(self, r):
        return np.zeros(len(r))

    def _gradient(self, r):
        return np.zeros_like(r)

    def _hessian(self, r):
        return np.zeros((len(r), self.d, self.d))


@dataclass(frozen=True)
class AnisotropicHarmonic(Potential):
    """V = 1/2 m sum_i omega_i^2 r_i^2."""

    omegas: Sequence[float] = (1.0,)
    mass: float = 1.0
    differentiation: object = field(default_factory=Analytic)

    @property
    def d(self):
        return len(self.omegas)

    @property
    def _k(self):
        return self.mass * np.asarray(self.omegas, dtype=float) ** 2

    def _value(self, r):
        return 0.5 * (r**2) @ self._k

    def _gradient(self, r):
        return r * self._k

    def _hessian(self, r):
        return np.broadcast_to(np.diag(self._k), (len(r), self.d, self.d)).copy()


@dataclass(frozen=True)
class IsotropicHarmonic(AnisotropicHarmonic):
    """V = 1/2 m omega^2 |r|^2."""

    def __init__(self, d: int = 1, omega: float = 1.0, mass: float = 1.0,
                 differentiation=None):
        object.__setattr__(self, "omegas", (float(omega),) * int(d))
        object.__setattr__(self, "mass", float(mass))
        object.__setattr__(self, "differentiation", differentiation or Analytic())

    @property
    def omega(self):
        return self.omegas[0]


@dataclass(frozen=True)
class Quartic(Potential):
    """V = lam |r|^4."""

    d: int = 1
    lam: float = 1.0
    differentiation: object = field(default_factory=Analytic)

    def _value(self, r):
        r2 = np.sum(r * r, axis=1)
        return self.lam * r2 * r2

    def _gradient(self, r):
        r2 = np.sum(r * r, axis=1)
        return 4.0 * self.lam * r2[:, None] * r

    def _hessian(self, r):
        r2 = np.sum(r * r, axis=1)
        eye = np.eye(self.d)
        return self.lam * (4.0 * r2[:, None, None] * eye
                           + 8.0 * r[:, :, None] * r[:, None, :])


@dataclass(frozen=True)
class GaussianWell(Potential):
    """V = V0 exp(-|r|^2 / (2 sigma^2)); a well for V0 < 0."""

    d: int = 1
    V0: float = -1.0
    sigma: float = 1.0
    differentiation: object = field(default_factory=Analytic)

    def _value(self, r):
        return self.V0 * np.exp(-np.sum(r * r, axis=1) / (2.0 * self.sigma**2))

    def _gradient(self, r):
        v = self._value(r)
        return -(v / self.sigma**2)[:, None] * r

    def _hessian(self, r):
        v = self._value(r)
        s2 = self.sigma**2
        outer = r[:, :, None] * r[:, None, :] / s2**2
        return v[:, None, None] * (outer - np.eye(self.d) / s2)


@dataclass(frozen=True)
class Custom(Potential):
    """User callable ``func(r) -> V`` on a declared validity box.

    ``box`` is ``(lower, upper)``, each a length-``d`` sequence. ``func``
    receives one point of shape ``(d,)`` unless ``vectorized`` is set, in
    which case it gets ``(n, d)`` and must return ``(n,)``. Supplying both
    ``grad`` and ``hess`` (same calling convention) enables Analytic mode;
    otherwise central differences are used.
    """

    d: int = 1
    func: Callable = None
    box: tuple = None
    grad: Optional[Callable] = None
    hess: Optional[Callable] = None
    vectorized: bool = False
    differentiation: object = None

    def __post_init__(self):
        if self.func is None or self.box is None:
            raise DomainError("Custom potential needs func and box")
        lo, hi = (np.asarray(b, dtype=float).reshape(-1) for b in self.box)
        if lo.size != self.d or hi.size != self.d or np.any(hi <= lo):
            raise DimensionMismatch("box must be (lower, upper) with d entries each, lower < upper")
        object.__setattr__(self, "box", (lo, hi))
        if self.differentiation is None:
            mode = Analytic() if (self.grad and self.hess) else CentralDifference()
            object.__setattr__(self, "differentiation", mode)
        if self.analytic and not (self.grad and self.hess):
            raise DomainError("Analytic mode needs grad and hess callables")

    def _check_domain(self, arr):
        lo, hi = self.box
        if np.any(arr < lo) or np.any(arr > hi):
            raise DomainError("point outside the validity box of the custom potential")

    def _apply(self, fn, r, shape):
        if self.vectorized:
            return np.asarray(fn(r), dtype=float).reshape((len(r),) + shape)
        return np.array([np.asarray(fn(x), dtype=float).reshape(shape) for x in r])

    def _value(self, r):
        return self._apply(self.func, r, ())

    def _gradient(self, r):
        return self._apply(self.grad, r, (self.d,))

    def _hessian(self, r):
        return self._apply(self.hess, r, (self.d, self.d))


KINDS = {
    "zero": Zero,
    "isotropic_harmonic": IsotropicHarmonic,
    "anisotropic_harmonic": AnisotropicHarmonic,
    "quartic": Quartic,
    "gaussian_well": GaussianWell,
}


def from_config(spec: dict, d: int, mass: float = 1.0) -> Potential:
    """Build a built-in potential from a config mapping such as
    ``{"kind": "gaussian_well", "V0": -5, "sigma": 1}``."""
    spec = dict(spec)
    kind = str(spec.pop("kind", "zero")).lower().replace("-", "_")
    diff = spec.pop("differentiation", "analytic")
    if diff == "analytic":
        mode = Analytic()
    elif diff in ("central_difference", "central-difference", "fd"):
        mode = CentralDifference(spec.pop("h1", None), spec.pop("h2", None))
    else:
        raise ValueError(f"unknown differentiation mode {diff!r}")

    if kind == "zero":
        pot = Zero(d=d, differentiation=mode)
    elif kind == "isotropic_harmonic":
        pot = IsotropicHarmonic(d=d, omega=float(spec.pop("omega", 1.0)),
                                mass=float(spec.pop("mass", mass)), differentiation=mode)
    elif kind == "anisotropic_harmonic":
        omegas = tuple(float(w) for w in spec.pop("omegas"))
        pot = AnisotropicHarmonic(omegas=omegas, mass=float(spec.pop("mass", mass)),
                                  differentiation=mode)
    elif kind == "quartic":
        pot = Quartic(d=d, lam=float(spec.pop("lam", 1.0)), differentiation=mode)
    elif kind == "gaussian_well":
        pot = GaussianWell(d=d, V0=float(spec.pop("V0", -1.0)),
                           sigma=float(spec.pop("sigma", 1.0)), differentiation=mode)
    else:
        raise ValueError(f"unknown potential kind {kind!r}; expected one of {sorted(KINDS)}")
    if spec:
        raise ValueError(f"unused potential parameters: {sorted(spec)}")
    if pot.d != d:
        raise DimensionMismatch(f"potential has d={pot.d}, context has d={d}")
    return pot


def directional_hessian(V: Potential, r, s) -> np.ndarray:
    """``grad(grad V . s) . s = s^T H s`` at ``r``."""
    H = V.hessian(r)
    s = np.asarray(s, dtype=float)
    return np.einsum("...i,...ij,...j->...", s, H, s)

