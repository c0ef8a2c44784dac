"""Per-prime case analysis for 3x^2 + 2p^(2b) = y^n.

A primitive solution with n an odd prime gives gamma = 3u + v sqrt(-6) with
v * f_n(u, v) = ±p^b and v | p^b.  The cases are v = p^b (the Lehmer term is
±1, so the pair is defective), 1 < v < p^b (forces n = p, v = p^(b-1)), and
v = 1 (f_n(u, 1) = ±p^b with n bounded by B_p).  Even n and b = 0 are closed
by class-group facts about Q(sqrt(-6)).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from . import search
from .lehmer import (
    LehmerSeed,
    Solution,
    bound_Bp,
    fn_eval,
    fn_eval_mod,
    reconstruct_solution,
    verify_solution,
)
from .ntheory import is_perfect_power, is_prime, odd_primes_up_to
from .sieve import (
    L_BOUND,
    S_MAX,
    T_MAX,
    SieveCertificate,
    basic_sieve_sweep,
    certificate_from_sweep,
    default_s_candidates,
    order_sieve,
    search_two_var,
)

# class number of Q(sqrt(-6)); the prime above 3 is not principal
H_MINUS6 = 2
BHV_LIMIT = 30

EVEN_N = "EvenN"
B0_NAGELL = "B0Nagell"
V_EQUALS_PB = "VEqualsPb"
MIDDLE = "MiddleCase"
V1 = "V1"

NO_SOLUTION = "no_solution"
SOLUTIONS = "solutions"
UNRESOLVED = "unresolved"

FLAG_BOUNDED = "bounded-b-search"
FLAG_OUTSIDE = "outside-proof-hypotheses"

# Mersenne primes used as exact fingerprints in the middle-case search
_FINGERPRINT_PRIMES = (2**61 - 1, 2**89 - 1, 2**107 - 1, 2**127 - 1)


class DefectiveDataError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    b_max_search: int = 64
    u_max_fallback: int = 10**4
    s_max: int = S_MAX
    t_max: int = T_MAX
    l_bound: int = L_BOUND
    middle_fingerprints: int = 2
    defective_data: Optional[str] = None

    def __post_init__(self) -> None:
        for name in ("b_max_search", "u_max_fallback", "s_max", "t_max", "l_bound"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not 1 <= self.middle_fingerprints <= len(_FINGERPRINT_PRIMES):
            raise ValueError("middle_fingerprints out of range")

    def to_dict(self) -> dict:
        return asdict(self)


# --- evidence ------------------------------------------------------------


@dataclass(frozen=True)
class Lemma:
    tag: str
    detail: str

    def to_dict(self) -> dict:
        return {"type": "lemma", "tag": self.tag, "detail": self.detail}


@dataclass(frozen=True)
class Search:
    tag: str
    sign: Optional[int]
    complete: bool
    bound: str
    found: int

    def to_dict(self) -> dict:
        return {
            "type": "search",
            "tag": self.tag,
            "sign": self.sign,
            "complete": self.complete,
            "bound": self.bound,
            "found": self.found,
        }


Evidence = Union[Lemma, Search, SieveCertificate]


def evidence_to_dict(ev: Evidence) -> dict:
    if isinstance(ev, SieveCertificate):
        return {"type": "certificate", **ev.to_dict()}
    return ev.to_dict()


def evidence_from_dict(data: dict) -> Evidence:
    kind = data.get("type")
    if kind == "lemma":
        return Lemma(data["tag"], data["detail"])
    if kind == "search":
        return Search(data["tag"], data["sign"], bool(data["complete"]), data["bound"], int(data["found"]))
    if kind == "certificate":
        return SieveCertificate.from_dict(data)
    raise ValueError(f"unknown evidence type {kind!r}")


@dataclass(frozen=True)
class CaseOutcome:
    case: str
    n: Optional[int]
    status: str
    solutions: tuple[Solution, ...] = ()
    evidence: tuple[Evidence, ...] = ()
    reason: str = ""

    @property
    def certificates(self) -> list[SieveCertificate]:
        return [e for e in self.evidence if isinstance(e, SieveCertificate)]

    @property
    def bounded(self) -> bool:
        return any(isinstance(e, Search) and not e.complete for e in self.evidence)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "n": self.n,
            "status": self.status,
            "solutions": [s.to_dict() for s in self.solutions],
            "evidence": [evidence_to_dict(e) for e in self.evidence],
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, data: dict) -> CaseOutcome:
        return cls(
            case=data["case"],
            n=data["n"],
            status=data["status"],
            solutions=tuple(Solution.from_dict(s) for s in data["solutions"]),
            evidence=tuple(evidence_from_dict(e) for e in data["evidence"]),
            reason=data.get("reason", ""),
        )


@dataclass
class CaseReport:
    p: int
    outcomes: list[CaseOutcome]
    derived_table_rows: list[Solution]
    config: dict
    flags: list[str] = field(default_factory=list)

    @property
    def unresolved(self) -> list[CaseOutcome]:
        return [o for o in self.outcomes if o.status == UNRESOLVED]

    @property
    def conclusive(self) -> bool:
        return not self.unresolved

    def certificates(self) -> list[SieveCertificate]:
        return [c for o in self.outcomes for c in o.certificates]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "conclusive": self.conclusive,
            "flags": list(self.flags),
            "config": dict(self.config),
            "outcomes": [o.to_dict() for o in self.outcomes],
            "solutions": [s.to_dict() for s in self.derived_table_rows],
        }

    @classmethod
    def from_dict(cls, data: dict) -> CaseReport:
        return cls(
            p=data["p"],
            outcomes=[CaseOutcome.from_dict(o) for o in data["outcomes"]],
            derived_table_rows=[Solution.from_dict(s) for s in data["solutions"]],
            config=dict(data["config"]),
            flags=list(data["flags"]),
        )


# --- defective-pair data -------------------------------------------------


def parse_defective_pairs(text: str) -> dict[int, tuple[tuple[int, int], ...]]:
    table: dict[int, tuple[tuple[int, int], ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'n: a,b; ...'")
        pairs = []
        for item in rest.split(";"):
            item = item.strip()
            if item:
                a, b = (int(t) for t in item.split(","))
                pairs.append((a, b))
        table[int(head)] = tuple(pairs)
    return table


@lru_cache(maxsize=8)
def load_defective_pairs(path: Optional[str] = None) -> dict[int, tuple[tuple[int, int], ...]]:
    try:
        if path is None:
            text = resources.files("threesq").joinpath("data/defective_lehmer_pairs.txt").read_text()
        else:
            text = Path(path).read_text()
    except OSError as exc:
        raise DefectiveDataError(f"defective tables unavailable: {exc}") from exc
    return parse_defective_pairs(text)


def defective_matches(table: dict, n: int) -> list[tuple[int, int]]:
    """(u, v) with (12u^2, -8v^2) equivalent to a listed n-defective pair."""
    if n not in table:
        raise DefectiveDataError(f"defective tables unavailable for n = {n}")
    out = []
    for a, b in table[n]:
        for sa, sb in ((a, b), (-a, -b)):
            if sa > 0 and sa % 12 == 0 and sb < 0 and (-sb) % 8 == 0:
                u, v = math.isqrt(sa // 12), math.isqrt(-sb // 8)
                if 12 * u * u == sa and 8 * v * v == -sb:
                    out.append((u, v))
    return out


def _defectivity_evidence(n: int, cfg: SolverConfig, why: str) -> tuple[Lemma, list[tuple[int, int]]]:
    if n > BHV_LIMIT:
        return Lemma("bhv-n>30", f"n = {n}: {why}; every n > 30 is totally non-defective"), []
    table = load_defective_pairs(cfg.defective_data)
    matches = defective_matches(table, n)
    detail = (
        f"n = {n}: {why}; none of the {len(table[n])} listed n-defective pairs "
        f"is equivalent to (12u^2, -8v^2)"
    )
    return Lemma("bhv-table", detail), matches


# --- individual cases ----------------------------------------------------


def even_n_case() -> CaseOutcome:
    lemma = Lemma(
        "class-group",
        f"(3x + d sqrt(-6)) = p3 * z^n with p3 non-principal and h(-6) = {H_MINUS6}; "
        "no solutions for even n",
    )
    return CaseOutcome(EVEN_N, None, NO_SOLUTION, evidence=(lemma,))


def nagell_case(p: int) -> CaseOutcome:
    # 2 + D x^2 = y^n has no solutions unless n | h(-2D); here D = 3, h = 2
    lemma = Lemma(
        "nagell",
        f"b = 0: 3x^2 + 2 = y^n, and no odd prime n divides h(-6) = {H_MINUS6}",
    )
    return CaseOutcome(B0_NAGELL, None, NO_SOLUTION, evidence=(lemma,))


def _seed_solutions(n: int, hits, p: int) -> list[Solution]:
    out = []
    for seed, b in hits:
        sol = reconstruct_solution(n, seed, p, b)
        if sol is not None:
            out.append(sol)
    return out


# moduli the congruence arguments use for f_n(u, p^b) = ±1
_DEFECTIVE_PREFERRED = {(3, 1): (4,), (3, -1): (3,), (5, 1): (8,), (5, -1): (3,)}


def defective_case(p: int, cfg: SolverConfig = SolverConfig()) -> CaseOutcome:
    """v = p^b: the Lehmer term is ±1, so the pair is n-defective."""
    evidence: list[Evidence] = []
    sols: list[Solution] = []
    for n in (3, 5):
        for sign in (1, -1):
            cert = search_two_var(sign, n, p, p, preferred=_DEFECTIVE_PREFERRED[(n, sign)])
            if cert is not None:
                evidence.append(cert)
                continue
            res = search.search_defective(n, p, sign, cfg.b_max_search)
            found = _seed_solutions(n, res.hits, p)
            sols.extend(found)
            evidence.append(
                Search(f"defective-n{n}", sign, res.complete, f"b <= {cfg.b_max_search}", len(found))
            )
    for n in odd_primes_up_to(BHV_LIMIT):
        if n < 7:
            continue
        lemma, matches = _defectivity_evidence(n, cfg, "the Lehmer term is ±1")
        evidence.append(lemma)
        for u, v in matches:
            b = search.p_adic_exponent(v, p)
            if b is not None and abs(fn_eval(n, u, v)) == 1:
                sol = reconstruct_solution(n, LehmerSeed(u, v), p, b)
                if sol is not None:
                    sols.append(sol)
    evidence.append(Lemma("bhv-n>30", "n > 30: every n > 30 is totally non-defective"))
    status = SOLUTIONS if sols else NO_SOLUTION
    return CaseOutcome(V_EQUALS_PB, None, status, tuple(sorted(sols, key=Solution.key)), tuple(evidence))


def compute_u0(p: int) -> int:
    """Least u0 with 3 C(p,2i+1) u^2 >= 2 C(p,2i+3) p^2 for every i and |u| >= u0."""
    if p < 5:
        raise ValueError("compute_u0 needs p >= 5")
    u0 = 0
    for i in range((p - 3) // 2 + 1):
        lhs = 3 * math.comb(p, 2 * i + 1)
        rhs = 2 * math.comb(p, 2 * i + 3) * p * p
        u = math.isqrt(rhs // lhs)
        while lhs * u * u < rhs:
            u += 1
        while u > 0 and lhs * (u - 1) ** 2 >= rhs:
            u -= 1
        u0 = max(u0, u)
    return u0


def delta_terms(p: int, u: int, t: int = 1) -> list[int]:
    """Differences of consecutive magnitudes in f_p(u, p^t), as exact integers."""
    half = (p - 1) // 2
    v = p**t
    out = []
    for i in range(half):
        a = math.comb(p, 2 * i + 1) * 2**i * 3 ** (half - i) * u ** (p - 1 - 2 * i) * v ** (2 * i)
        b = (
            math.comb(p, 2 * i + 3)
            * 2 ** (i + 1)
            * 3 ** (half - i - 1)
            * u ** (p - 3 - 2 * i)
            * v ** (2 * i + 2)
        )
        out.append(a - b)
    return out


def middle_b2_candidates(p: int, sign: int, u0: int) -> list[int]:
    """u in [1, u0) with 3^((p-1)/2) u^(p-1) = sign mod p^2 (so p does not divide u)."""
    p2 = p * p
    goal = sign * pow(pow(3, (p - 1) // 2, p2), -1, p2) % p2
    if goal % p != 1:
        return []
    g = (goal - 1) // p
    residues = []
    for r in range(1, p):
        a = (pow(r, p - 1, p2) - 1) // p
        u = (r + ((a - g) * r % p) * p) % p2
        residues.append(u)
    out = []
    for base in residues:
        u = base
        while u < u0:
            if u > 0:
                out.append(u)
            u += p2
    return sorted(out)


def _middle_b2_search(p: int, sign: int, cfg: SolverConfig) -> tuple[Search, list[Solution]]:
    u0 = compute_u0(p)
    primes = _FINGERPRINT_PRIMES[: cfg.middle_fingerprints]
    cands = middle_b2_candidates(p, sign, u0)
    sols = []
    for u in cands:
        if any(fn_eval_mod(p, u, p, q) != sign * p % q for q in primes):
            continue
        if fn_eval(p, u, p) == sign * p:
            sol = reconstruct_solution(p, LehmerSeed(u, p), p, 2)
            if sol is not None:
                sols.append(sol)
    ev = Search(
        "middle-b2-below-u0",
        sign,
        True,
        f"b = 2, |u| < u0 = {u0}, {len(cands)} candidates mod p^2",
        len(sols),
    )
    return ev, sols


def middle_case(p: int, cfg: SolverConfig = SolverConfig()) -> CaseOutcome:
    """1 < v < p^b: only n = p, v = p^(b-1), f_p(u, v) = ±p."""
    r = p % 12
    if r in (7, 11):
        lemma = Lemma(
            "mod-12",
            f"p = {r} mod 12: f_p(u, p^(b-1)) = +p needs p = 1 mod 12 and = -p needs p = 5 mod 12",
        )
        return CaseOutcome(MIDDLE, p, NO_SOLUTION, evidence=(lemma,))
    sign = 1 if r == 1 else -1
    evidence: list[Evidence] = [
        Lemma(
            "mod-12",
            f"p = {r} mod 12: mod p^2 and mod 3 leave only f_p(u, p^(b-1)) = {'+' if sign > 0 else '-'}p",
        )
    ]
    sols: list[Solution] = []
    why = "the Lehmer term is ±p and p | (alpha - beta)^2, so it has no primitive divisor"
    if p == 5:
        cert = search_two_var(sign * p, p, p, p, preferred=(8,))
        if cert is not None:
            evidence.append(cert)
        else:
            return CaseOutcome(MIDDLE, p, UNRESOLVED, evidence=tuple(evidence), reason="no congruence found for p = 5")
    else:
        lemma, matches = _defectivity_evidence(p, cfg, why)
        evidence.append(lemma)
        for u, v in matches:
            b = search.p_adic_exponent(v, p)
            if b is not None and fn_eval(p, u, v) == sign * p:
                sol = reconstruct_solution(p, LehmerSeed(u, v), p, b + 1)
                if sol is not None:
                    sols.append(sol)
    if sign > 0:
        ev, found = _middle_b2_search(p, sign, cfg)
        evidence.append(ev)
        sols.extend(found)
    status = SOLUTIONS if sols else NO_SOLUTION
    return CaseOutcome(MIDDLE, p, status, tuple(sols), tuple(evidence))


def _v1_search(p: int, n: int, sign: int, cfg: SolverConfig) -> search.SearchResult:
    if n == 3:
        return search.solve_n3(p, sign, cfg.b_max_search)
    if n == 5:
        return search.solve_n5(p, sign, cfg.b_max_search)
    return search.search_v1(n, p, sign, cfg.b_max_search, cfg.u_max_fallback)


def v1_case(
    p: int,
    n: int,
    cfg: SolverConfig = SolverConfig(),
    killers: Optional[dict[int, list[int]]] = None,
) -> CaseOutcome:
    """v = 1: f_n(u, 1) = ±p^b with 3 <= n <= B_p an odd prime."""
    if n > bound_Bp(p):
        raise ValueError(f"exponent exceeds bound: n = {n} > B_p = {bound_Bp(p)}")
    if killers is None:
        killers = basic_sieve_sweep(p, [n])[n]
    evidence: list[Evidence] = list(certificate_from_sweep(p, n, killers))
    covered = {e for c in evidence for e in c.signs}
    sols: list[Solution] = []
    open_bounded = False
    for sign in (1, -1):
        if sign in covered:
            continue
        cert = order_sieve(
            p, n, default_s_candidates(p, cfg.s_max, cfg.t_max), cfg.l_bound, sign
        )
        if cert is not None:
            evidence.append(cert)
            continue
        res = _v1_search(p, n, sign, cfg)
        found = _seed_solutions(n, res.hits, p)
        sols.extend(found)
        bound = f"b <= {cfg.b_max_search}" if not res.complete else "exhaustive"
        evidence.append(Search(f"v1-n{n}", sign, res.complete, bound, len(found)))
        if not res.complete and n >= 7 and not found:
            open_bounded = True
    sols.sort(key=Solution.key)
    if sols:
        return CaseOutcome(V1, n, SOLUTIONS, tuple(sols), tuple(evidence))
    if open_bounded:
        return CaseOutcome(
            V1, n, UNRESOLVED, (), tuple(evidence),
            reason="sieves failed and only a b-bounded search was possible",
        )
    return CaseOutcome(V1, n, NO_SOLUTION, (), tuple(evidence))


def lift_composite(solutions: list[Solution]) -> list[Solution]:
    """Add the composite-exponent forms y^n = (z^(k/d))^(n d) when y = z^k."""
    out = set(solutions)
    for s in solutions:
        pp = is_perfect_power(s.y) if s.y >= 2 else None
        if pp is None:
            continue
        z, k = pp
        for d in range(2, k + 1):
            if k % d == 0:
                out.add(Solution(s.p, s.b, s.x, z ** (k // d), s.n * d))
    return sorted(out, key=Solution.key)


# --- p = 2, 3 ----------------------------------------------------------------


def _small_prime_report(p: int, cfg: SolverConfig) -> list[CaseOutcome]:
    if p == 3:
        lemma = Lemma(
            "p3-valuation",
            "b >= 1: 3 | y and 3 does not divide x, so 3x^2 + 2*9^b = 3 or 6 mod 9 while 9 | y^n",
        )
        return [
            CaseOutcome(V_EQUALS_PB, None, NO_SOLUTION, evidence=(lemma,)),
            CaseOutcome(MIDDLE, None, NO_SOLUTION, evidence=(lemma,)),
            CaseOutcome(V1, None, NO_SOLUTION, evidence=(lemma,)),
        ]
    middle = Lemma("p2-middle", "1 < v < 2^b forces n = p = 2, which is not odd")
    parity = Lemma(
        "p2-parity",
        "v = 1: f_n(u, 1) = u^(n-1) mod 2 forces u even, then y = 3u^2 + 2 is even, "
        "contradicting gcd(x, y) = 1",
    )
    return [
        defective_case(2, cfg),
        CaseOutcome(MIDDLE, None, NO_SOLUTION, evidence=(middle,)),
        CaseOutcome(V1, None, NO_SOLUTION, evidence=(parity,)),
    ]


def solve_prime(p: int, cfg: SolverConfig = SolverConfig()) -> CaseReport:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    outcomes = [even_n_case(), nagell_case(p)]
    flags = []
    if p in (2, 3):
        outcomes.extend(_small_prime_report(p, cfg))
        flags.append(FLAG_OUTSIDE)
    else:
        outcomes.append(defective_case(p, cfg))
        outcomes.append(middle_case(p, cfg))
        ns = [n for n in odd_primes_up_to(bound_Bp(p))]
        sweep = basic_sieve_sweep(p, ns)
        outcomes.extend(v1_case(p, n, cfg, sweep[n]) for n in ns)
    if any(o.bounded for o in outcomes):
        flags.append(FLAG_BOUNDED)
    sols = [s for o in outcomes for s in o.solutions]
    assert all(verify_solution(s) for s in sols)
    return CaseReport(p, outcomes, lift_composite(sols), cfg.to_dict(), sorted(flags))
