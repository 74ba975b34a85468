"""Command-line front end.

Every number is written with 15 significant digits, so repeated runs are
byte-identical and parsing then re-serialising JSON output is a no-op.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Sequence

from .critical import solve_all
from .cvt import check_cvt
from .distortion import DEFAULT_TOL, distortion
from .errors import BracketNotFound, MultipleRoots
from .measure import DEFAULT_DEPTH_CAP
from .oracle import DEFAULT_DEPTH, compare
from .quantizers import build_family
from .reference_values import R_CRITICAL, run_anchors

SIG_DIGITS = 15
DEFAULT_THREADS = 4


def fmt(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def _clean(obj: Any) -> Any:
    """Round floats to 15 significant digits; non-finite values become null."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return float(fmt(obj)) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def to_json(obj: Any) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(args, record: dict, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    return to_json(record) if args.format == "json" else to_csv(header, rows)


def _codebook(args):
    index_set = args.index_set.split(",") if args.index_set else None
    return build_family(args.set, args.r, args.n, index_set, args.variant)


def cmd_build(args) -> int:
    q = _codebook(args)
    labels = q.labels or [()] * q.n
    record = {
        "family": args.set,
        "r": args.r,
        "n": q.n,
        "points": list(q.points),
        "words": [list(lab) for lab in labels],
    }
    rows = [(i, p, ";".join(lab)) for i, (p, lab) in enumerate(zip(q.points, labels))]
    _emit(args, _render(args, record, ("index", "point", "words"), rows))
    return 0


def cmd_distortion(args) -> int:
    res = distortion(args.r, _codebook(args), tol=args.tol, depth_cap=args.depth_cap)
    record = {
        "family": args.set,
        "r": args.r,
        "n": args.n,
        "value": res.value,
        "lower": res.lower,
        "upper": res.upper,
        "resolved_depth": res.resolved_depth,
        "unresolved_mass": res.unresolved_mass,
    }
    _emit(args, _render(args, record, list(record), [list(record.values())]))
    return 0


def cmd_cvt(args) -> int:
    report = check_cvt(args.r, _codebook(args), tol=args.centroid_tol)
    record = {
        "family": args.set,
        "r": args.r,
        "n": args.n,
        "is_cvt": report.is_cvt,
        "max_centroid_residual": report.max_centroid_residual,
        "failing": report.failing_inequalities,
        "cells": [
            {"point": c.point, "mass": c.cell_mass, "centroid": c.cell_centroid, "residual": c.residual}
            for c in report.per_point
        ],
    }
    rows = [(c.point, c.cell_mass, c.cell_centroid, c.residual) for c in report.per_point]
    _emit(args, _render(args, record, ("point", "mass", "centroid", "residual"), rows))
    return 0


def cmd_critical(args) -> int:
    try:
        consts = solve_all(args.tol)
    except (BracketNotFound, MultipleRoots) as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return 1
    record = consts.as_dict()
    rows = [(name, entry["value"], entry["residual"]) for name, entry in record.items()]
    _emit(args, _render(args, record, ("constant", "value", "residual"), rows))
    return 0


def _threads() -> int:
    raw = os.environ.get("QNT_THREADS")
    if raw is None:
        return min(DEFAULT_THREADS, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"QNT_THREADS must be a positive integer, got {raw!r}") from None


SWEEP_HEADER = ("r", "v_beta", "v_gamma", "v_delta", "oracle", "winner")


def cmd_sweep(args) -> int:
    if args.steps < 1 or not 0.0 < args.r_lo <= args.r_hi < 0.5:
        raise ValueError("need 0 < r-lo <= r-hi < 1/2 and steps >= 1")
    if args.steps == 1:
        grid = [args.r_lo]
    else:
        grid = [args.r_lo + (args.r_hi - args.r_lo) * i / (args.steps - 1) for i in range(args.steps)]

    def row(r: float):
        c = compare(r, args.n, args.depth)
        return (r, c.v_beta, c.v_gamma, c.v_delta, c.oracle, c.argmin)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(row, grid))  # map keeps input order
    record = {"n": args.n, "depth": args.depth, "rows": [dict(zip(SWEEP_HEADER, r)) for r in rows]}
    _emit(args, _render(args, record, SWEEP_HEADER, rows))
    return 0


def _parse_perturb(items: Sequence[str]) -> dict[str, float]:
    out = {}
    for item in items:
        name, sep, delta = item.rpartition("=")
        if not sep:
            raise ValueError(f"--perturb expects NAME=DELTA, got {item!r}")
        out[name] = float(delta)
    return out


def cmd_verify(args) -> int:
    outcomes = run_anchors(perturb=_parse_perturb(args.perturb))
    failed = [o.name for o in outcomes if not o.passed]
    record = {
        "passed": not failed,
        "count": len(outcomes),
        "failed": failed,
        "anchors": [
            {
                "name": o.name,
                "group": o.group,
                "expected": o.expected,
                "computed": o.computed,
                "error": o.error,
                "tol": o.tol,
                "passed": o.passed,
            }
            for o in outcomes
        ],
    }
    rows = [(o.name, o.group, o.expected, o.computed, o.error, o.tol, o.passed) for o in outcomes]
    header = ("name", "group", "expected", "computed", "error", "tol", "passed")
    _emit(args, _render(args, record, header, rows))
    if failed:
        print("failing anchors: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def _positive(x: str) -> float:
    v = float(x)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {x}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=float, default=R_CRITICAL, help="contraction ratio in (0, 1/2)")
    common.add_argument("--tol", type=_positive, default=DEFAULT_TOL)
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="oracle discretisation depth")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--output", help="write to this file instead of stdout")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--set", choices=("beta", "gamma", "delta"), default="beta")
    family.add_argument("--n", type=int, required=True)
    family.add_argument("--variant", choices=("left", "right"), default="left")
    family.add_argument("--index-set", help="comma-separated words refined one level")

    parser = argparse.ArgumentParser(prog="cantor-quant", description="Quantizers for uniform Cantor distributions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common, family], help="print a candidate codebook")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("distortion", parents=[common, family], help="distortion enclosure of a codebook")
    p.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)
    p.set_defaults(func=cmd_distortion)

    p = sub.add_parser("cvt", parents=[common, family], help="centroidal Voronoi test of a codebook")
    p.add_argument("--centroid-tol", type=_positive, default=1e-9)
    p.set_defaults(func=cmd_cvt)

    p = sub.add_parser("critical", parents=[common], help="solve the critical constants")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("sweep", parents=[common], help="compare candidates and the oracle over a grid of r")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--r-lo", type=float, default=0.42)
    p.add_argument("--r-hi", type=float, default=0.44)
    p.add_argument("--steps", type=int, default=21)
    p.set_defaults(func=cmd_sweep, default_format="csv")

    p = sub.add_parser("verify", parents=[common], help="check every reference value")
    p.add_argument("--perturb", action="append", default=[], metavar="NAME=DELTA", help="shift r for one anchor")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, "default_format", "json")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
