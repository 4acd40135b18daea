"""semiodm command line: ``eval``, ``verify`` and ``compare``.

Exit codes: 0 ok, 1 verification failure, 2 configuration error,
3 domain error (forbidden point, coincident points for a pair method, ...).
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
from typing import List, Optional

import numpy as np

from . import config as _config
from . import runner
from .errors import DomainError, ModelUnsupported, SemiodmError

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3


def _fmt(x) -> str:
    return "null" if x is None or not math.isfinite(x) else format(float(x), ".17g")


def _jsonable(obj):
    """Replace non-finite floats and numpy scalars so json.dumps stays strict."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _stamp(args) -> Optional[str]:
    if args.no_header_time:
        return None
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def render_table(fmt: str, names: List[str], coords, values, meta: dict, stamp) -> str:
    if fmt == "json":
        doc = {"meta": dict(meta), "rows": runner.rows(names, coords, values)}
        if stamp:
            doc["meta"]["generated"] = stamp
        return json.dumps(_jsonable(doc), indent=1, allow_nan=False) + "\n"
    buf = io.StringIO()
    if stamp:
        buf.write(f"# generated {stamp}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for c, v in zip(coords, values):
        w.writerow([_fmt(x) for x in c] + [_fmt(x) for x in v])
    return buf.getvalue()


def _emit(text: str, path: Optional[str]):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(args, command) -> _config.RunConfig:
    data = _config.apply_overrides(_config.load(args.config), args.set)
    if args.format:
        data.setdefault("output", {})["format"] = args.format
    if args.out:
        data.setdefault("output", {})["path"] = args.out
    if args.skip_forbidden:
        data["skip_forbidden"] = True
    if command == "verify" and getattr(args, "suite", None):
        data.setdefault("verify", {})["suite"] = args.suite
    return _config.resolve(data, command)


def cmd_eval(args) -> int:
    cfg = _load(args, "eval")
    values = runner.evaluate(cfg, cfg.method)
    names = cfg.column_names() + list(runner.ORDER_COLUMNS)
    meta = {"command": "eval", "config": cfg.resolved}
    _emit(render_table(cfg.out_format, names, cfg.coords, values, meta, _stamp(args)), cfg.out_path)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _load(args, "compare")
    res = runner.compare(cfg)
    names = cfg.column_names() + res["columns"]
    meta = {"command": "compare", "config": cfg.resolved, "summary": res["summary"]}
    _emit(render_table(cfg.out_format, names, cfg.coords, res["values"], meta, _stamp(args)),
          cfg.out_path)
    s = res["summary"]
    print(json.dumps(_jsonable(s)), file=sys.stderr)
    return EXIT_FAILED if s.get("passed") is False else EXIT_OK


def cmd_verify(args) -> int:
    from .verification import SUITES, run_suite

    cfg = _load(args, "verify")
    names = sorted(SUITES) if cfg.suite == "all" else [cfg.suite]
    for n in names:
        if n not in SUITES:
            raise _config.ConfigError(f"unknown suite {n!r}; choose from {sorted(SUITES)} or 'all'")
    suites = {}
    for n in names:
        suites[n] = [r.as_dict() for r in run_suite(n)]
    passed = all(r["passed"] for reps in suites.values() for r in reps)
    doc = {"passed": passed, "suites": suites}
    stamp = _stamp(args)
    if stamp:
        doc["generated"] = stamp
    _emit(json.dumps(_jsonable(doc), indent=1, allow_nan=False) + "\n", cfg.out_path)
    return EXIT_OK if passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semiodm", description=(
        "Semiclassical one-body density matrix: evaluate grids, run identity "
        "suites and compare methods."))
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_config):
        sp.add_argument("--config", required=need_config, help="TOML or JSON run configuration")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config entry, e.g. context.mu=40.5 (repeatable)")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--skip-forbidden", action="store_true",
                        help="write null rows for points outside the allowed region")
        sp.add_argument("--no-header-time", action="store_true",
                        help="omit the timestamp so output is byte-reproducible")

    common(sub.add_parser("eval", help="evaluate one method on a grid"), True)
    common(sub.add_parser("compare", help="difference of two methods on a grid"), True)
    v = sub.add_parser("verify", help="run a verification suite")
    common(v, False)
    v.add_argument("suite", nargs="?", help="suite name or 'all' (overrides verify.suite)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"eval": cmd_eval, "compare": cmd_compare, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except (_config.ConfigError, ModelUnsupported) as e:
        print(f"semiodm: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as e:
        print(f"semiodm: domain error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except SemiodmError as e:
        print(f"semiodm: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
