"""Command-line driver: solve, scan, verify and oracle."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .ntheory import is_prime
from .oracle import ANY, FIXED, PRIME_POWER, OracleQuery, enumerate_solutions
from .report import (
    SCHEMA_VERSION,
    MalformedInput,
    dumps_json,
    parse_document,
    render_case_report_md,
    render_csv,
    render_scan_md,
    certificates_document,
    run_scan,
    verify_document,
)
from .solver import DefectiveDataError, SolverConfig, solve_prime

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _add_solver_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--bmax-search", type=_positive_int, default=SolverConfig.b_max_search,
                    help="b bound for the n = 3, 5 searches")
    sp.add_argument("--defective-data", default=None, help="defective Lehmer pair table")
    sp.add_argument("--format", choices=("json", "csv", "md"), default="json")
    sp.add_argument("--output", default=None, help="write here instead of stdout")
    sp.add_argument("--certificates", default=None, help="also dump every certificate to this path")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="threesq",
        description="Primitive solutions of (x-d)^2 + x^2 + (x+d)^2 = y^n with d = p^b.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="full case analysis for one prime")
    sp.add_argument("--p", type=int, required=True)
    _add_solver_flags(sp)

    sp = sub.add_parser("scan", help="solve every prime up to --pmax")
    sp.add_argument("--pmax", type=int, required=True)
    sp.add_argument("--jobs", type=_positive_int, default=1)
    sp.add_argument("--no-runtime", action="store_true", help="omit timing from JSON output")
    _add_solver_flags(sp)

    sp = sub.add_parser("verify", help="re-check a solution table, report or certificate dump")
    sp.add_argument("input")

    sp = sub.add_parser("oracle", help="brute-force enumeration")
    sp.add_argument("--ymax", type=int, required=True)
    sp.add_argument("--n", type=_int_list, required=True, help="exponents, e.g. 3,5")
    sp.add_argument("--d-filter", choices=(ANY, "prime-power", FIXED), default="prime-power")
    sp.add_argument("--pbound", type=int, default=5000)
    sp.add_argument("--d", type=int, default=None, help="d for --d-filter fixed")
    sp.add_argument("--format", choices=("json", "csv", "md"), default="csv")
    sp.add_argument("--output", default=None)
    return ap


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text, newline="\n")
    except OSError as exc:
        raise UsageError(f"cannot write {output}: {exc.strerror}") from None


def _config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(b_max_search=args.bmax_search, defective_data=args.defective_data)


def cmd_solve(args: argparse.Namespace) -> int:
    if not is_prime(args.p):
        raise UsageError(f"--p {args.p} is not prime")
    report = solve_prime(args.p, _config(args))
    if args.format == "json":
        text = dumps_json({"schema_version": SCHEMA_VERSION, "kind": "solve", "report": report.to_dict()})
    elif args.format == "csv":
        text = render_csv(report.derived_table_rows)
    else:
        text = render_case_report_md(report)
    _emit(text, args.output)
    if args.certificates:
        _emit(dumps_json(certificates_document(report.certificates())), args.certificates)
    for o in report.unresolved:
        print(f"unresolved: p = {report.p}, {o.case} n = {o.n}: {o.reason}", file=sys.stderr)
    return EXIT_OK if report.conclusive else EXIT_FAIL


def cmd_scan(args: argparse.Namespace) -> int:
    if args.pmax < 2:
        raise UsageError("--pmax must be at least 2")
    scan = run_scan(args.pmax, _config(args), args.jobs)
    if args.format == "json":
        text = dumps_json(scan.to_dict(with_runtime=not args.no_runtime))
    elif args.format == "csv":
        text = render_csv(scan.table)
    else:
        text = render_scan_md(scan)
    _emit(text, args.output)
    if args.certificates:
        _emit(dumps_json(certificates_document(scan.certificates())), args.certificates)
    for u in scan.unresolved:
        print(f"unresolved: p = {u['p']}, {u['case']} n = {u['n']}: {u['reason']}", file=sys.stderr)
    return EXIT_OK if scan.conclusive else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    try:
        res = verify_document(parse_document(text))
    except MalformedInput as exc:
        raise UsageError(f"{args.input}: {exc}") from None
    for f in res.failures:
        print(f"FAIL {f}", file=sys.stderr)
    print(
        f"checked {res.checked_solutions} solutions, {res.checked_certificates} certificates: "
        f"{'ok' if res.ok else f'{len(res.failures)} failures'}"
    )
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_oracle(args: argparse.Namespace) -> int:
    d_filter = PRIME_POWER if args.d_filter == "prime-power" else args.d_filter
    try:
        q = OracleQuery(args.ymax, frozenset(args.n), d_filter, args.pbound, args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    hits = enumerate_solutions(q)
    if args.format == "json":
        text = dumps_json({
            "schema_version": SCHEMA_VERSION,
            "kind": "oracle",
            "hits": [vars(h) for h in hits],
        })
    elif args.format == "csv":
        lines = ["p,b,x,y,n,d"]
        lines += [f"{'' if h.p is None else h.p},{'' if h.b is None else h.b},{h.x},{h.y},{h.n},{h.d}" for h in hits]
        text = "\n".join(lines) + "\n"
    else:
        lines = ["| p | b | x | y | n | d |", "|---|---|---|---|---|---|"]
        lines += [f"| {h.p or ''} | {'' if h.b is None else h.b} | {h.x} | {h.y} | {h.n} | {h.d} |" for h in hits]
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "scan": cmd_scan, "verify": cmd_verify, "oracle": cmd_oracle}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DefectiveDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
