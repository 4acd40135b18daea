"""Grid evaluation behind the command line: method dispatch, forbidden-point
handling and difference statistics."""

from __future__ import annotations

from typing import Dict, List

import numpy as np

from .bloch import laplace_route_odm, symmetric_wk_odm
from .config import RunConfig
from .errors import ForbiddenRegion
from .fermi import allowed
from .odm import (OdmBreakdown, PairPoint, SymmetricPoint, gvodm_diagonal_terms, gvodm_terms,
                  kodm_diagonal_terms, kodm_terms)
from .oracle import HarmonicOscillator1D, SpectrumSpec, exact_odm

ORDER_COLUMNS = ("order0", "order1", "order2", "total")
# methods whose gradients sit at r (pair form) rather than at the midpoint R
PAIR_METHODS = ("kodm", "laplace-route", "exact")


def split_coords(cfg: RunConfig):
    """Both coordinate forms of the grid: (r, r', R, s), each (n, d)."""
    d, X = cfg.d, cfg.coords
    if cfg.mode == "diagonal":
        return X, X, X, np.zeros_like(X)
    a, b = X[:, :d], X[:, d:]
    if cfg.mode == "pair-points":
        return a, b, 0.5 * (a + b), a - b
    return a + 0.5 * b, a - 0.5 * b, a, b


def _exact_spec(cfg: RunConfig) -> SpectrumSpec:
    model = HarmonicOscillator1D(cfg.potential.omegas[0])
    if isinstance(cfg.filling, (int, float)) and not isinstance(cfg.filling, bool):
        return SpectrumSpec.filled(model, int(cfg.filling))
    return SpectrumSpec.from_chemical_potential(model, cfg.ctx, at_mu=str(cfg.filling))


def _evaluate(cfg: RunConfig, method: str, r, rp, R, s) -> OdmBreakdown:
    ctx, V = cfg.ctx, cfg.potential
    diag = cfg.mode == "diagonal"
    if method == "exact":
        tot = np.asarray(exact_odm(_exact_spec(cfg), ctx, r[:, 0], rp[:, 0]), dtype=float)
        nan = np.full_like(tot, np.nan)
        return OdmBreakdown(nan, nan, nan, tot)
    if method == "kodm":
        return kodm_diagonal_terms(ctx, V, r) if diag else kodm_terms(ctx, V, PairPoint(r, rp))
    if method == "gvodm":
        return gvodm_diagonal_terms(ctx, V, R) if diag else gvodm_terms(ctx, V, SymmetricPoint(R, s))
    if method == "laplace-route":
        return laplace_route_odm(ctx, V, PairPoint(r, rp), allow_diagonal=diag)
    if method == "wk-symmetric":
        return symmetric_wk_odm(ctx, V, SymmetricPoint(R, s))
    raise ValueError(f"unknown method {method!r}")


def evaluate(cfg: RunConfig, method: str) -> np.ndarray:
    """(n, 4) array of order0, order1, order2, total for ``method``.

    Points outside the classically allowed region raise ForbiddenRegion
    unless ``cfg.skip_forbidden`` is set, in which case their rows are NaN.
    """
    r, rp, R, s = split_coords(cfg)
    n = len(cfg.coords)
    out = np.full((n, 4), np.nan)
    if method == "exact":
        keep = np.ones(n, dtype=bool)
    else:
        anchor = r if method in PAIR_METHODS else R
        keep = np.asarray(allowed(cfg.ctx, cfg.potential, anchor), dtype=bool).reshape(n)
        if not np.all(keep) and not cfg.skip_forbidden:
            bad = int(np.flatnonzero(~keep)[0])
            raise ForbiddenRegion(f"grid point {bad} ({cfg.coords[bad].tolist()}) is outside "
                                  "the classically allowed region")
    if np.any(keep):
        res = _evaluate(cfg, method, r[keep], rp[keep], R[keep], s[keep])
        for j, col in enumerate(res.orders() + (res.total,)):
            out[keep, j] = np.asarray(col, dtype=float).reshape(-1)
    return out


def compare(cfg: RunConfig) -> Dict:
    """Per-point totals of both methods, their difference and summary stats."""
    a, b = cfg.methods
    va = evaluate(cfg, a)[:, 3]
    vb = evaluate(cfg, b)[:, 3]
    diff = va - vb
    scale = np.maximum(np.maximum(np.abs(va), np.abs(vb)), np.finfo(float).tiny)
    rel = np.abs(diff) / scale
    ok = np.isfinite(diff)
    summary = {
        "methods": [a, b],
        "points": int(len(diff)),
        "points_compared": int(np.sum(ok)),
        "max_abs_diff": float(np.max(np.abs(diff[ok]))) if np.any(ok) else None,
        "max_rel_diff": float(np.max(rel[ok])) if np.any(ok) else None,
        "l2_diff": float(np.sqrt(np.sum(diff[ok] ** 2))) if np.any(ok) else None,
    }
    if cfg.compare_tolerance is not None:
        summary["tolerance"] = cfg.compare_tolerance
        summary["passed"] = bool(summary["max_rel_diff"] is not None
                                 and summary["max_rel_diff"] <= cfg.compare_tolerance)
    return {"columns": [a, b, "diff", "rel_diff"],
            "values": np.column_stack([va, vb, diff, rel]), "summary": summary}


def rows(names: List[str], coords: np.ndarray, values: np.ndarray) -> List[Dict]:
    """Row dicts for JSON output, NaN mapped to None."""
    out = []
    for c, v in zip(coords, values):
        row = {k: float(x) for k, x in zip(names[:len(c)], c)}
        row.update({k: (None if not np.isfinite(x) else float(x))
                    for k, x in zip(names[len(c):], v)})
        out.append(row)
    return out
