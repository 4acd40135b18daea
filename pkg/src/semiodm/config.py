"""Run configuration: loading, overrides, validation and grid construction."""

from __future__ import annotations

import copy
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .errors import SemiodmError
from .fermi import FermiContext
from .potentials import IsotropicHarmonic, Potential, from_config

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

METHODS = ("kodm", "gvodm", "wk-symmetric", "laplace-route", "exact")
MODES = ("pair-points", "symmetric-points", "diagonal")
# coordinate-set names per grid mode
MODE_AXES = {
    "pair-points": ("r", "r_prime"),
    "symmetric-points": ("R", "s"),
    "diagonal": ("x",),
}

DEFAULTS: Dict[str, Any] = {
    "context": {"d": 1, "hbar": 1.0, "m": 1.0, "mu": 1.0, "g": 1},
    "potential": {"kind": "zero"},
    "method": "gvodm",
    "methods": [],
    "grid": {"mode": "symmetric-points"},
    "output": {"format": "csv"},
    "skip_forbidden": False,
    "oracle": {"filling": "half"},
    "compare": {},
    "verify": {"suite": "all"},
}


class ConfigError(SemiodmError, ValueError):
    """Unreadable or inconsistent run configuration (exit code 2)."""


def load(path: Optional[str]) -> dict:
    if path is None:
        return {}
    p = Path(path)
    try:
        text = p.read_bytes()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        if p.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = tomllib.loads(text.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot parse config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("config root must be a table/object")
    return data


def _parse_value(text: str):
    try:
        return json.loads(text)
    except ValueError:
        low = text.lower()
        if low in ("true", "false"):
            return low == "true"
        return text


def apply_overrides(data: dict, sets: List[str]) -> dict:
    """Apply ``key.sub=value`` overrides; values are parsed as JSON when
    possible (numbers, lists, booleans), else kept as strings."""
    out = copy.deepcopy(data)
    for item in sets or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        parts = [k for k in key.strip().split(".") if k]
        if not parts:
            raise ConfigError(f"empty key in --set {item!r}")
        node = out
        for k in parts[:-1]:
            node = node.setdefault(k, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set {item!r}: {k} is not a table")
        node[parts[-1]] = _parse_value(raw.strip())
    return out


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


@dataclass
class RunConfig:
    ctx: FermiContext
    potential: Potential
    method: str
    methods: List[str]
    mode: str
    coords: np.ndarray  # (n, d) for diagonal, (n, 2d) otherwise
    out_format: str
    out_path: Optional[str]
    skip_forbidden: bool
    filling: Any
    compare_tolerance: Optional[float]
    suite: str
    resolved: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return self.ctx.d

    def column_names(self) -> List[str]:
        names = []
        for axis in MODE_AXES[self.mode]:
            names += [f"{axis}_{i}" for i in range(self.d)]
        return names


def _axis_values(spec, d, name):
    """[lo, hi, n] per axis (a single triple is reused for every axis), or
    an explicit list of values under {"values": [...]}"""
    if isinstance(spec, dict) and "values" in spec:
        vals = np.asarray(spec["values"], dtype=float)
        return [vals.reshape(-1)] * d
    arr = spec
    if not isinstance(arr, list) or not arr:
        raise ConfigError(f"grid.{name} must be [lo, hi, count] or a list of those")
    if not isinstance(arr[0], list):
        arr = [arr] * d
    if len(arr) != d:
        raise ConfigError(f"grid.{name} has {len(arr)} axes, context has d={d}")
    out = []
    for ax in arr:
        if len(ax) != 3:
            raise ConfigError(f"grid.{name} axis must be [lo, hi, count], got {ax}")
        lo, hi, n = float(ax[0]), float(ax[1]), ax[2]
        if int(n) != n or n < 1:
            raise ConfigError(f"grid.{name}: count must be a positive integer, got {n}")
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ConfigError(f"grid.{name}: range must be finite")
        out.append(np.linspace(lo, hi, int(n)))
    return out


def build_grid(grid: dict, d: int, mode: str) -> np.ndarray:
    if "points" in grid:
        pts = np.asarray(grid["points"], dtype=float)
        width = d * len(MODE_AXES[mode])
        if pts.ndim != 2 or pts.shape[1] != width:
            raise ConfigError(f"grid.points rows must have {width} entries for mode {mode}")
        if not np.all(np.isfinite(pts)):
            raise ConfigError("grid.points must be finite")
        return pts
    axes = []
    for name in MODE_AXES[mode]:
        if name not in grid:
            raise ConfigError(f"grid.{name} is required for mode {mode}")
        axes += _axis_values(grid[name], d, name)
    rows = list(itertools.product(*axes))
    return np.asarray(rows, dtype=float).reshape(len(rows), -1)


def resolve(data: dict, command: str = "eval") -> RunConfig:
    cfg = _merge(DEFAULTS, data)
    unknown = set(cfg) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    try:
        c = cfg["context"]
        ctx = FermiContext(d=int(c["d"]), hbar=float(c["hbar"]), m=float(c["m"]),
                           mu=float(c["mu"]), g=int(c["g"]))
        V = from_config(cfg["potential"], ctx.d, ctx.m)
    except (SemiodmError, ValueError, TypeError, KeyError) as e:
        raise ConfigError(f"invalid context/potential: {e}") from e

    method = str(cfg["method"])
    methods = [str(m) for m in (cfg["compare"].get("methods") or cfg["methods"] or [])]
    for m in [method] + methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}; expected one of {METHODS}")
    if command == "compare" and len(methods) != 2:
        raise ConfigError("compare needs exactly two methods (compare.methods = [a, b])")
    used = methods if command == "compare" else [method]
    if "exact" in used and not (isinstance(V, IsotropicHarmonic) and ctx.d == 1):
        raise ConfigError("method 'exact' requires a 1D isotropic harmonic potential")
    if "exact" in used and V.mass != ctx.m:
        raise ConfigError("method 'exact' needs the oscillator mass to equal context.m")

    mode = str(cfg["grid"].get("mode", "symmetric-points"))
    if mode not in MODES:
        raise ConfigError(f"unknown grid mode {mode!r}; expected one of {MODES}")
    coords = build_grid(cfg["grid"], ctx.d, mode) if command != "verify" else np.empty((0, 0))

    fmt = str(cfg["output"].get("format", "csv"))
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv or json, got {fmt!r}")
    filling = cfg["oracle"].get("n_occupied", cfg["oracle"].get("filling", "half"))
    tol = cfg["compare"].get("tolerance")
    return RunConfig(
        ctx=ctx, potential=V, method=method, methods=methods, mode=mode, coords=coords,
        out_format=fmt, out_path=cfg["output"].get("path"),
        skip_forbidden=bool(cfg["skip_forbidden"]), filling=filling,
        compare_tolerance=None if tol is None else float(tol),
        suite=str(cfg["verify"].get("suite", "all")), resolved=cfg,
    )
