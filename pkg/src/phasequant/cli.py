"""Command-line entry point: ``phasequant <subcommand> ...``.

Subcommands emit CSV (fixed header, 15 significant digits) or JSON carrying
``"schema": "phasequant/1"``. Exit codes: 0 success, 1 reproduction claims
failed, 2 argument or domain error, 3 numerical convergence failure.

An optional ``--config`` file of ``key = value`` lines supplies defaults;
explicit flags always win. ``PHASEQUANT_OUT_DIR`` sets the default output
directory of ``reproduce``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import claims, coherent, spectral, two_mode
from .coherent import CoherentSpec
from .exceptions import ConvergenceError, DomainError, NonMonotoneError, TruncationError
from .irrep import IrrepParams, OperatorKind, build_operator

SCHEMA = "phasequant/1"
ENV_OUT_DIR = "PHASEQUANT_OUT_DIR"
EXIT_OK, EXIT_CLAIMS, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3

# config keys and their types; anything else in the file is rejected
CONFIG_KEYS = {
    "format": str,
    "scan_lo": float,
    "scan_hi": float,
    "scan_tol": float,
    "rho_max": float,
    "grid_points": int,
    "irrep_dim": int,
    "two_mode_M": int,
    "spectrum_dim": int,
    "improper_n_max": int,
    "omega_angle": float,
}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Render a number with 15 significant digits; other values via ``str``."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        # adding 0.0 folds -0.0 into 0.0
        return f"{x + 0.0:.15g}"
    return str(x)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no NaN/inf
        return x if math.isfinite(x) else None
    return obj


def to_json(payload: dict) -> str:
    return json.dumps(_jsonable({"schema": SCHEMA, **payload}), indent=2, sort_keys=True) + "\n"


def load_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def _opt(args, cfg, flag, key=None, default=None):
    val = getattr(args, flag, None)
    if val is not None:
        return val
    return cfg.get(key or flag, default)


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _format(args, cfg):
    f = _opt(args, cfg, "format", default="csv")
    if f not in ("csv", "json"):
        raise UsageError(f"format must be csv or json, got {f!r}")
    return f


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _writable_dir(path: Path):
    try:
        path.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(dir=path, prefix=".probe"):
            pass
    except OSError as exc:
        raise UsageError(f"output directory {path} is not writable: {exc}") from None


def cmd_reproduce(args, cfg) -> int:
    out = Path(args.out or os.environ.get(ENV_OUT_DIR) or "phasequant-results")
    names = args.only or list(claims.CLAIMS)
    unknown = [n for n in names if n not in claims.CLAIMS]
    if unknown:
        raise UsageError(f"unknown claim(s): {', '.join(unknown)}; choose from {', '.join(claims.CLAIMS)}")
    # fail before any computation if the results cannot be written
    _writable_dir(out)
    settings = {k: v for k, v in cfg.items() if k in claims.DEFAULT_SETTINGS}
    results = []
    for name in names:
        res = claims.run_claim(name, settings)
        results.append(res)
        status = "PASS" if res.passed else "FAIL"
        print(f"[{res.index:2d}] {status} {name} ({res.runtime:.2f} s)", file=sys.stderr)
    try:
        for res in results:
            (out / f"{res.index:02d}_{res.name}.csv").write_text(to_csv(res.header, res.rows), encoding="utf-8")
        report = {
            "settings": {**claims.DEFAULT_SETTINGS, **settings},
            "passed": all(r.passed for r in results),
            "claims": {r.name: r.to_dict() for r in results},
        }
        (out / "report.json").write_text(to_json(report), encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"writing results to {out} failed: {exc}") from None
    failed = [r for r in results if not r.passed]
    if failed:
        print("failed claims:", file=sys.stderr)
        for r in failed:
            for c in r.failures():
                print(f"  {r.name}: {c.name} = {fmt(c.value)} (required {c.limit})", file=sys.stderr)
        return EXIT_CLAIMS
    return EXIT_OK


def cmd_scan_k(args, cfg) -> int:
    lo = _opt(args, cfg, "lo", "scan_lo", 0.2)
    hi = _opt(args, cfg, "hi", "scan_hi", 0.5)
    tol = _opt(args, cfg, "tol", "scan_tol", 1e-3)
    grid = spectral.GridConfig(rho_max=cfg.get("rho_max", 500.0), points=cfg.get("grid_points", 2000))
    rep = spectral.threshold_scan(lo, hi, tol, grid)
    b_lo, b_hi = rep.threshold_bracket
    print(f"threshold bracket: [{fmt(b_lo)}, {fmt(b_hi)}]", file=sys.stderr)
    if _format(args, cfg) == "json":
        text = to_json({"command": "scan-k", "lo": lo, "hi": hi, "tol": tol, **rep.to_dict()})
    else:
        rows = [[k, s, r, bool(s <= 2.0)]
                for k, s, r in zip(rep.k_grid, rep.sup_ratio, rep.per_k_argmax_rho)]
        text = to_csv(["k", "sup_ratio", "argmax_rho", "admissible"], rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_spectrum(args, cfg) -> int:
    dim = _opt(args, cfg, "dim", "spectrum_dim", 2000)
    params = IrrepParams(args.k, cfg.get("omega_angle", 0.0))
    w = spectral.cos_spectrum(params, dim)
    if _format(args, cfg) == "json":
        text = to_json({"command": "spectrum", "k": args.k, "dim": dim, "eigenvalues": list(w)})
    else:
        text = to_csv(["index", "eigenvalue"], enumerate(w))
    _emit(text, args.out)
    return EXIT_OK


def cmd_coherent(args, cfg) -> int:
    spec = CoherentSpec.from_polar(args.k, args.rho, args.alpha, cfg.get("omega_angle", 0.0))
    k3 = coherent.k3_moments(spec)
    k12 = coherent.k12_moments(spec)
    trig = coherent.trig_expectation(spec)
    row = {
        "k": spec.k,
        "rho": args.rho,
        "alpha": args.alpha,
        "mean_K1": k12.mean_K1,
        "mean_K2": k12.mean_K2,
        "mean_K3": k3.mean,
        "var_K1": k12.var_K1,
        "var_K2": k12.var_K2,
        "var_K3": k3.var,
        "mean_cos": trig.mean_cos,
        "mean_sin": trig.mean_sin,
        "g_ratio": coherent.g_ratio(spec.k, spec.rho),
        "required_dim": coherent.required_dim(spec),
    }
    if _format(args, cfg) == "json":
        text = to_json({"command": "coherent", **row})
    else:
        text = to_csv(list(row), [list(row.values())])
    _emit(text, args.out)
    return EXIT_OK


def cmd_two_mode(args, cfg) -> int:
    M = args.M if args.M is not None else cfg.get("two_mode_M", 12)
    recs = two_mode.irrep_decomposition(M)
    if _format(args, cfg) == "json":
        dirac = two_mode.dirac_sqrt_check(max(M, 3))
        payload = {
            "command": "two-mode",
            "M": M,
            "commutator_defect": list(two_mode.two_mode_commutator_defect(M)) if M >= 4 else None,
            "dirac_defect": dirac.defect,
            "dirac_eigen_ok": dirac.eigen_ok,
            "sectors": [{"delta": r.delta, "branch": r.branch, "k": r.k,
                         "multiplicity": r.multiplicity, "max_defect": r.max_defect} for r in recs],
        }
        text = to_json(payload)
    else:
        rows = [[r.delta, r.branch, r.k, r.multiplicity, r.max_defect] for r in recs]
        text = to_csv(["delta", "branch", "k", "multiplicity", "max_defect"], rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_dump_operator(args, cfg) -> int:
    try:
        kind = OperatorKind(args.kind)
    except ValueError:
        raise UsageError(f"unknown operator kind {args.kind!r}; choose from "
                         + ", ".join(k.value for k in OperatorKind)) from None
    op = build_operator(kind, IrrepParams(args.k, cfg.get("omega_angle", 0.0)), args.dim)
    entries = [(r, c, v.real, v.imag) for r, c, v in op.entries()]
    if _format(args, cfg) == "json":
        text = to_json({"command": "dump-operator", "kind": kind.value, "k": args.k, "dim": args.dim,
                        "entries": [list(e) for e in entries]})
    else:
        text = to_csv(["row", "col", "re", "im"], entries)
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phasequant", description=__doc__.split("\n")[0])
    p.add_argument("--config", help="key = value file of defaults (flags win)")
    sub = p.add_subparsers(dest="command", required=True)

    def add_io(sp):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=None)

    sp = sub.add_parser("reproduce", help="run the acceptance claims and write report.json + CSVs")
    sp.add_argument("--out", help=f"output directory (default: ${ENV_OUT_DIR} or ./phasequant-results)")
    sp.add_argument("--only", nargs="+", metavar="CLAIM", help="run only these claims: " + ", ".join(claims.CLAIMS))
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("scan-k", help="bisect for the admissibility threshold in k")
    sp.add_argument("--lo", type=float)
    sp.add_argument("--hi", type=float)
    sp.add_argument("--tol", type=float)
    add_io(sp)
    sp.set_defaults(func=cmd_scan_k)

    sp = sub.add_parser("spectrum", help="eigenvalues of the truncated cosine operator")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--dim", type=int)
    add_io(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("coherent", help="moments of a coherent state")
    sp.add_argument("--k", type=float, required=True)
    sp.add_argument("--rho", type=float, required=True)
    sp.add_argument("--alpha", type=float, default=0.0)
    add_io(sp)
    sp.set_defaults(func=cmd_coherent)

    sp = sub.add_parser("two-mode", help="sector decomposition of the two-mode realization")
    sp.add_argument("M", type=int, nargs="?", help="levels per mode")
    add_io(sp)
    sp.set_defaults(func=cmd_two_mode)

    sp = sub.add_parser("dump-operator", help="nonzero entries of a truncated operator")
    sp.add_argument("kind", help=", ".join(k.value for k in OperatorKind))
    sp.add_argument("k", type=float)
    sp.add_argument("dim", type=int)
    add_io(sp)
    sp.set_defaults(func=cmd_dump_operator)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
        return args.func(args, cfg)
    except (UsageError, DomainError, NonMonotoneError) as exc:
        print(f"phasequant: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TruncationError as exc:
        hint = f" (try dim >= {exc.required_dim})" if exc.required_dim else ""
        print(f"phasequant: truncation error: {exc}{hint}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ConvergenceError, OverflowError) as exc:
        print(f"phasequant: convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
