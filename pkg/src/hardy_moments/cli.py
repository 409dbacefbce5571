"""Command-line front end: evaluation subcommands, report emission, manifests."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .divisors import get_table
from .errors import DomainError, ToleranceError
from .expsum import (GoodPointNotFound, exp_sum_d3, scan_interval,
                     scan_summary, write_scan_csv, write_scan_json)
from .formula import (COMPARISON_CSV_FIELDS, compare_theorem1, comparison_row)
from .quadrature import MomentKind, integrate_moment
from .saddle import solve_saddle, summation_range
from .suite import run_suite, suite_table_bound
from .zeta import ZMethod, hardy_z

_F = "{:.17g}".format


class _Manifest:
    """Run record written alongside any machine-readable output."""

    def __init__(self, command: str, parameters: dict):
        self.data = {
            "command": command,
            "parameters": {k: v for k, v in parameters.items() if v is not None},
            "tool_version": __version__,
            "started": datetime.now(timezone.utc).isoformat(),
            "finished": None,
            "outputs": [],
            "calibration_constants": {},
            "environment": {
                "HARDY_CACHE_DIR": os.environ.get("HARDY_CACHE_DIR", "./cache"),
                "HARDY_THREADS": os.environ.get(
                    "HARDY_THREADS", str(os.cpu_count() or 1)),
            },
        }

    def add_output(self, path: Path) -> None:
        self.data["outputs"].append(str(path))

    def flush(self) -> None:
        if not self.data["outputs"]:
            return
        self.data["finished"] = datetime.now(timezone.utc).isoformat()
        path = Path(self.data["outputs"][0] + ".manifest.json")
        with open(path, "w") as fh:
            json.dump(self.data, fh, indent=2)
            fh.write("\n")


def _write_csv(path: Path, fields: list[str], rows: list[dict],
               manifest: _Manifest) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    manifest.add_output(path)


def _write_json(path: Path, payload, manifest: _Manifest) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    manifest.add_output(path)


def _add_io_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--csv", type=Path, help="write a machine-readable CSV")
    p.add_argument("--json", type=Path, help="write a machine-readable JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardy",
        description="Critical-line moment and exponential-sum toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("z-eval", help="evaluate Hardy's Z(t)")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--method", choices=["rs", "oracle"], default="rs")
    _add_io_flags(p)

    p = sub.add_parser("sieve", help="build/load the divisor table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dump", type=Path, help="write the table as CSV")
    _add_io_flags(p)

    p = sub.add_parser("saddle", help="solve the saddle equation for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--u", type=float, required=True)
    _add_io_flags(p)

    p = sub.add_parser("moment", help="moment integral of Z at height T")
    p.add_argument("--kind", choices=[k.value for k in MomentKind],
                   required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--u", type=float, default=0.0)
    _add_io_flags(p)

    p = sub.add_parser("compare", help="moment integral vs explicit formula")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--variant", choices=["exact", "thm1"], default="exact")
    p.add_argument("--conjugate", action="store_true")
    _add_io_flags(p)

    p = sub.add_parser("expsum", help="divisor-weighted exponential sum")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    _add_io_flags(p)

    p = sub.add_parser("msq", help="mean square of S(alpha,N) over [a,b]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--find-point", action="store_true")
    _add_io_flags(p)

    p = sub.add_parser("suite", help="run the acceptance grid")
    p.add_argument("--level", choices=["smoke", "full"], default="smoke")
    p.add_argument("--calibrate", action="store_true",
                   help="refit and store the empirical constants")
    _add_io_flags(p)
    return parser


def _cmd_z_eval(args, manifest) -> int:
    method = ZMethod.RIEMANN_SIEGEL if args.method == "rs" else ZMethod.ORACLE
    res = hardy_z(args.t, method)
    print(f"Z({_F(res.t)}) = {_F(res.z)}  [{res.method.value}]  "
          f"est_error <= {res.est_error:.3e}")
    row = {"t": _F(res.t), "z": _F(res.z), "method": res.method.value,
           "est_error": _F(res.est_error)}
    if args.csv:
        _write_csv(args.csv, list(row), [row], manifest)
    if args.json:
        _write_json(args.json, row, manifest)
    return 0


def _cmd_sieve(args, manifest) -> int:
    table = get_table(args.n)
    print(f"divisor table to {table.bound}: sum d3^2 = "
          f"{int(table.d3sq_prefix[table.bound])}, cache at "
          f"{os.environ.get('HARDY_CACHE_DIR', './cache')}")
    dump_target = args.dump or args.csv
    if dump_target:
        rows = [{"n": str(n), "d": str(int(table.d[n])),
                 "d3": str(int(table.d3[n])),
                 "d3sq_prefix": str(int(table.d3sq_prefix[n]))}
                for n in range(1, table.bound + 1)]
        _write_csv(dump_target, ["n", "d", "d3", "d3sq_prefix"], rows, manifest)
    if args.json:
        _write_json(args.json, {"bound": table.bound,
                                "d3sq_total": int(table.d3sq_prefix[-1])},
                    manifest)
    return 0


def _cmd_saddle(args, manifest) -> int:
    sp = solve_saddle(args.n, args.u)
    print(f"t_n = {_F(sp.t_n)}  (residual {sp.residual:.2e}; "
          f"approximants {_F(sp.approx1)}, {_F(sp.approx2)}, {_F(sp.approx3)})")
    row = {"n": str(sp.n), "u": _F(sp.U), "t_n": _F(sp.t_n),
           "residual": _F(sp.residual), "approx1": _F(sp.approx1),
           "approx2": _F(sp.approx2), "approx3": _F(sp.approx3)}
    if args.csv:
        _write_csv(args.csv, list(row), [row], manifest)
    if args.json:
        _write_json(args.json, row, manifest)
    return 0


def _cmd_moment(args, manifest) -> int:
    res = integrate_moment(args.kind, args.t, args.u)
    print(f"{args.kind}(T={_F(res.T)}, U={_F(res.U)}) = {_F(res.value)}  "
          f"(est_error {res.est_error:.3e}, {res.evaluations} evaluations)")
    row = {"kind": args.kind, "T": _F(res.T), "U": _F(res.U),
           "value": _F(res.value), "est_error": _F(res.est_error),
           "evaluations": str(res.evaluations)}
    if args.csv:
        _write_csv(args.csv, list(row), [row], manifest)
    if args.json:
        _write_json(args.json, row, manifest)
    return 0


def _cmd_compare(args, manifest) -> int:
    rng = summation_range(args.t, args.u)
    table = get_table(max(rng.n_hi + 1, 16))
    cmp = compare_theorem1(args.t, args.u, None, table,
                           variant=args.variant, conjugate=args.conjugate)
    print(f"lhs = {_F(cmp.lhs)}, Re rhs = {_F(cmp.rhs.real)}, "
          f"normalized |diff|/T^(3/4) = {_F(cmp.normalized)} "
          f"({cmp.n_terms} terms, variant {cmp.variant.value})")
    row = comparison_row(cmp)
    if args.csv:
        _write_csv(args.csv, COMPARISON_CSV_FIELDS, [row], manifest)
    if args.json:
        _write_json(args.json, row, manifest)
    return 0


def _cmd_expsum(args, manifest) -> int:
    table = get_table(2 * args.n)
    s = exp_sum_d3(args.alpha, args.n, 2 * args.n, table)
    print(f"S(alpha={_F(args.alpha)}, N={args.n}) = "
          f"{_F(s.real)} + {_F(s.imag)}i  (|S| = {_F(abs(s))})")
    row = {"alpha": _F(args.alpha), "S_re": _F(s.real), "S_im": _F(s.imag),
           "abs_S": _F(abs(s))}
    if args.csv:
        _write_csv(args.csv, list(row), [row], manifest)
    if args.json:
        _write_json(args.json, row, manifest)
    return 0


def _cmd_msq(args, manifest) -> int:
    table = get_table(2 * args.n)
    scan = scan_interval(args.a, args.b, args.n, table, locate=args.find_point)
    summary = scan_summary(scan)
    print(f"ms_exact = {_F(scan.ms_exact)}, ms_quad = {_F(scan.ms_quad)}, "
          f"ratio = {_F(scan.ratio)}")
    if scan.good_point:
        print(f"good point C = {_F(scan.good_point.C)} with |S(C,N)| = "
              f"{_F(scan.good_point.magnitude)} (bound {_F(summary['bound'])})")
    if args.csv:
        write_scan_csv(args.csv, scan)
        manifest.add_output(args.csv)
    if args.json:
        write_scan_json(args.json, scan)
        manifest.add_output(args.json)
    return 0


def _cmd_suite(args, manifest) -> int:
    report = run_suite(level=args.level, calibrate=args.calibrate)
    payload = {
        "level": report.level,
        "passed": report.passed,
        "criteria": [{"number": r.number, "name": r.name, "passed": r.passed,
                      "detail": r.detail, "seconds": r.seconds}
                     for r in report.results],
    }
    manifest.data["calibration_constants"] = report.calibration.as_dict()
    if args.csv:
        rows = [{"number": str(r.number), "name": r.name,
                 "passed": str(int(r.passed)), "seconds": _F(r.seconds),
                 "detail": r.detail} for r in report.results]
        _write_csv(args.csv, ["number", "name", "passed", "seconds", "detail"],
                   rows, manifest)
    if args.json:
        _write_json(args.json, payload, manifest)
    return 0 if report.passed else 1


_HANDLERS = {
    "z-eval": _cmd_z_eval, "sieve": _cmd_sieve, "saddle": _cmd_saddle,
    "moment": _cmd_moment, "compare": _cmd_compare, "expsum": _cmd_expsum,
    "msq": _cmd_msq, "suite": _cmd_suite,
}


def cli_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    manifest = _Manifest(args.command, {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in vars(args).items() if k != "command"})
    try:
        code = _HANDLERS[args.command](args, manifest)
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ToleranceError, GoodPointNotFound) as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return 1
    finally:
        manifest.flush()
    return code


def main() -> None:
    sys.exit(cli_dispatch())
