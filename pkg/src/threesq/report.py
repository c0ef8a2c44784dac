"""Scan orchestration, report serialisation and replay-based verification."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from .lehmer import Solution, verify_solution
from .ntheory import primes_up_to
from .sieve import SieveCertificate, replay
from .solver import CaseReport, SolverConfig, solve_prime

SCHEMA_VERSION = 1
CSV_HEADER = ("p", "b", "x", "y", "n")


class MalformedInput(ValueError):
    """Input that cannot be parsed; the message carries a location."""


def _table_key(s: Solution) -> tuple:
    return (s.p, s.n, s.b, s.y, s.x)


@dataclass
class ScanReport:
    p_max: int
    config: dict
    reports: list[CaseReport]
    runtime: dict = field(default_factory=dict)

    @property
    def table(self) -> list[Solution]:
        return sorted((s for r in self.reports for s in r.derived_table_rows), key=_table_key)

    @property
    def unresolved(self) -> list[dict]:
        return [
            {"p": r.p, "case": o.case, "n": o.n, "reason": o.reason}
            for r in self.reports
            for o in r.unresolved
        ]

    @property
    def conclusive(self) -> bool:
        return all(r.conclusive for r in self.reports)

    def certificates(self) -> list[SieveCertificate]:
        return [c for r in self.reports for c in r.certificates()]

    def body(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "scan",
            "config": {"pmax": self.p_max, **self.config},
            "table": [s.to_dict() for s in self.table],
            "unresolved": self.unresolved,
            "reports": [r.to_dict() for r in self.reports],
        }

    def to_dict(self, with_runtime: bool = True) -> dict:
        out = self.body()
        if with_runtime:
            out["runtime"] = dict(self.runtime)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ScanReport:
        config = dict(data["config"])
        p_max = config.pop("pmax")
        return cls(
            p_max,
            config,
            [CaseReport.from_dict(r) for r in data["reports"]],
            dict(data.get("runtime", {})),
        )


def _solve_worker(args: tuple[int, SolverConfig]) -> CaseReport:
    p, cfg = args
    return solve_prime(p, cfg)


def run_scan(p_max: int, cfg: SolverConfig = SolverConfig(), jobs: int = 1) -> ScanReport:
    if p_max < 2:
        raise ValueError("pmax must be at least 2")
    if jobs < 1:
        raise ValueError("jobs must be positive")
    primes = list(primes_up_to(p_max).primes)
    start = time.perf_counter()
    if jobs == 1:
        reports = [solve_prime(p, cfg) for p in primes]
    else:
        # largest primes cost most, so hand them out first
        order = primes[::-1]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = dict(zip(order, pool.map(_solve_worker, [(p, cfg) for p in order])))
        reports = [done[p] for p in primes]
    elapsed = time.perf_counter() - start
    return ScanReport(p_max, cfg.to_dict(), reports, {"jobs": jobs, "seconds": round(elapsed, 3)})


# --- rendering -----------------------------------------------------------


def dumps_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def render_csv(rows: list[Solution]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in rows:
        w.writerow(s.as_row())
    return buf.getvalue()


def _md_rows(rows: list[Solution]) -> list[str]:
    lines = ["| p | b | x | y | n |", "|---|---|---|---|---|"]
    lines += [f"| {s.p} | {s.b} | {s.x} | {s.y} | {s.n} |" for s in rows]
    return lines


def render_case_report_md(r: CaseReport) -> str:
    lines = [f"## p = {r.p}", ""]
    if r.flags:
        lines += [f"flags: {', '.join(r.flags)}", ""]
    lines += ["| case | n | status | evidence |", "|---|---|---|---|"]
    for o in r.outcomes:
        ev = "; ".join(_evidence_summary(e) for e in o.evidence) or o.reason
        lines.append(f"| {o.case} | {o.n if o.n is not None else ''} | {o.status} | {ev} |")
    lines += ["", *_md_rows(r.derived_table_rows), ""]
    return "\n".join(lines)


def _evidence_summary(e) -> str:
    if isinstance(e, SieveCertificate):
        if e.kind == "OrderSieve":
            return f"{e.kind} t={e.t} l={e.l}"
        return f"{e.kind} s={e.s}"
    tag = getattr(e, "tag", "")
    if hasattr(e, "complete"):
        return f"search {tag} ({e.bound}, found {e.found})"
    return tag


def render_scan_md(scan: ScanReport) -> str:
    lines = [f"# Scan p <= {scan.p_max}", ""]
    lines += _md_rows(scan.table)
    lines += ["", f"unresolved: {len(scan.unresolved)}"]
    for u in scan.unresolved:
        lines.append(f"- p = {u['p']}, {u['case']} n = {u['n']}: {u['reason']}")
    return "\n".join(lines) + "\n"


def solutions_document(rows: list[Solution]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "solutions",
        "solutions": [s.to_dict() for s in rows],
    }


def certificates_document(certs: list[SieveCertificate]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "certificates",
        "certificates": [c.to_dict() for c in certs],
    }


# --- verification --------------------------------------------------------


@dataclass
class VerifyResult:
    checked_solutions: int = 0
    checked_certificates: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _parse_csv(text: str) -> dict:
    lines = text.splitlines()
    header = tuple(h.strip() for h in lines[0].split(","))
    if header != CSV_HEADER:
        raise MalformedInput(f"line 1: expected header {','.join(CSV_HEADER)}")
    rows = []
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 5:
            raise MalformedInput(f"line {lineno}: expected 5 fields, got {len(fields)}")
        try:
            rows.append(dict(zip(CSV_HEADER, (int(f) for f in fields))))
        except ValueError:
            raise MalformedInput(f"line {lineno}: non-integer field") from None
    return {"schema_version": SCHEMA_VERSION, "kind": "solutions", "solutions": rows}


def parse_document(text: str) -> dict:
    if not text.strip():
        raise MalformedInput("line 1: empty input")
    if not text.lstrip().startswith("{"):
        return _parse_csv(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise MalformedInput("line 1: top level must be an object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise MalformedInput(f"unsupported schema_version {version!r}")
    return data


def _load(what: str, items: Any, build):
    if not isinstance(items, list):
        raise MalformedInput(f"{what}: expected a list")
    out = []
    for i, item in enumerate(items):
        try:
            out.append(build(item))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"{what}[{i}]: {exc!s}") from None
    return out


def verify_document(data: dict) -> VerifyResult:
    kind = data.get("kind")
    res = VerifyResult()
    sols: list[tuple[str, Solution]] = []
    certs: list[tuple[str, SieveCertificate]] = []
    if kind == "solutions":
        rows = _load("solutions", data.get("solutions"), Solution.from_dict)
        sols = [(f"solutions[{i}]", s) for i, s in enumerate(rows)]
    elif kind == "certificates":
        cs = _load("certificates", data.get("certificates"), SieveCertificate.from_dict)
        certs = [(f"certificates[{i}]", c) for i, c in enumerate(cs)]
    elif kind in ("scan", "solve"):
        raw = data.get("reports") if kind == "scan" else [data.get("report")]
        reports = _load("reports", raw, CaseReport.from_dict)
        if kind == "scan":
            rows = _load("table", data.get("table"), Solution.from_dict)
            sols += [(f"table[{i}]", s) for i, s in enumerate(rows)]
        for r in reports:
            for o in r.outcomes:
                sols += [(f"p={r.p} {o.case}", s) for s in o.solutions]
                certs += [(f"p={r.p} {o.case} n={o.n}", c) for c in o.certificates]
            sols += [(f"p={r.p} solutions", s) for s in r.derived_table_rows]
    else:
        raise MalformedInput(f"unknown document kind {kind!r}")
    for where, s in sols:
        res.checked_solutions += 1
        if not verify_solution(s):
            res.failures.append(f"{where}: row {','.join(map(str, s.as_row()))} fails verification")
    for where, c in certs:
        res.checked_certificates += 1
        try:
            ok = replay(c)
        except ValueError as exc:
            ok = False
            where = f"{where} ({exc})"
        if not ok:
            res.failures.append(f"{where}: certificate {c.kind} does not replay")
    return res
