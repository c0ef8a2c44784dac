from __future__ import annotations

import math

import pytest

from threesq.lehmer import Solution, bound_Bp, verify_solution
from threesq.ntheory import odd_primes_up_to
from threesq.oracle import ANY, FIXED, OracleQuery, enumerate_solutions
from threesq.sieve import TWO_VAR, replay
from threesq.solver import (
    B0_NAGELL,
    EVEN_N,
    FLAG_BOUNDED,
    FLAG_OUTSIDE,
    MIDDLE,
    NO_SOLUTION,
    SOLUTIONS,
    V1,
    V_EQUALS_PB,
    CaseReport,
    DefectiveDataError,
    Lemma,
    Search,
    SolverConfig,
    compute_u0,
    defective_case,
    defective_matches,
    delta_terms,
    even_n_case,
    lift_composite,
    load_defective_pairs,
    middle_b2_candidates,
    middle_case,
    nagell_case,
    parse_defective_pairs,
    solve_prime,
    v1_case,
)


def test_even_n_and_nagell():
    o = even_n_case()
    assert o.case == EVEN_N and o.status == NO_SOLUTION
    assert isinstance(o.evidence[0], Lemma)
    assert nagell_case(79).status == NO_SOLUTION
    assert enumerate_solutions(OracleQuery(50, {4, 6}, ANY)) == []
    assert enumerate_solutions(OracleQuery(12, {8, 10}, ANY)) == []
    assert enumerate_solutions(OracleQuery(100, set(range(3, 12)), FIXED, d=1)) == []


def test_solve_p7():
    r = solve_prime(7)
    assert r.derived_table_rows == [Solution(7, 1, 3, 5, 3)]
    assert r.conclusive
    cases = [o.case for o in r.outcomes]
    assert cases[:4] == [EVEN_N, B0_NAGELL, V_EQUALS_PB, MIDDLE]
    assert cases.count(EVEN_N) == 1
    assert [o.n for o in r.outcomes if o.case == V1] == odd_primes_up_to(bound_Bp(7))
    for o in r.outcomes:
        if o.status == NO_SOLUTION:
            assert all(replay(c) for c in o.certificates)


def test_solve_p5_fully_certified():
    r = solve_prime(5)
    assert r.derived_table_rows == [] and r.conclusive
    assert FLAG_BOUNDED not in r.flags
    assert all(o.status == NO_SOLUTION for o in r.outcomes)


def test_solve_p3109():
    r = solve_prime(3109)
    assert r.derived_table_rows == [Solution(3109, 1, 627, 29, 5)]
    assert r.conclusive and FLAG_BOUNDED in r.flags


def test_small_primes_flagged():
    r2 = solve_prime(2)
    assert FLAG_OUTSIDE in r2.flags
    assert r2.derived_table_rows == [Solution(2, 1, 21, 11, 3)]
    r3 = solve_prime(3)
    assert FLAG_OUTSIDE in r3.flags and r3.derived_table_rows == []
    with pytest.raises(ValueError):
        solve_prime(9)


def test_defective_case_p7_certificates():
    o = defective_case(7)
    assert o.status == NO_SOLUTION
    by = {(c.n, c.target): c.s for c in o.certificates}
    assert by[(3, 1)] == 4 and by[(5, 1)] == 8
    assert all(c.kind == TWO_VAR and replay(c) for c in o.certificates)
    tags = {e.tag for e in o.evidence if isinstance(e, Lemma)}
    assert {"bhv-table", "bhv-n>30"} <= tags


def test_defective_table_data():
    table = load_defective_pairs()
    assert table[11] == ()
    for n in odd_primes_up_to(30):
        if n >= 7:
            assert defective_matches(table, n) == []
    with pytest.raises(DefectiveDataError, match="defective tables unavailable"):
        load_defective_pairs("/nonexistent/pairs.txt")
    with pytest.raises(DefectiveDataError, match="defective tables unavailable"):
        defective_case(7, SolverConfig(defective_data="/nonexistent/pairs.txt"))


def test_defective_matches_detects_the_form():
    # (12u^2, -8v^2) = (12, -8) with u = v = 1, listed under either sign
    assert defective_matches(parse_defective_pairs("7: 12,-8"), 7) == [(1, 1)]
    assert defective_matches(parse_defective_pairs("7: -12,8"), 7) == [(1, 1)]
    with pytest.raises(ValueError):
        parse_defective_pairs("7 1,2")


def test_compute_u0_examples():
    assert compute_u0(13) == 50
    assert compute_u0(7) == 13
    with pytest.raises(ValueError):
        compute_u0(3)


def test_compute_u0_matches_closed_form_and_is_monotone():
    prev = 0
    for p in odd_primes_up_to(100):
        if p < 5:
            continue
        u0 = compute_u0(p)
        # u0 = ceil(p * sqrt(2r/3)) with r = (p-1)(p-2)/6
        num = 2 * (p - 1) * (p - 2) * p * p
        closed = math.isqrt(num // 18)
        while 18 * closed * closed < num:
            closed += 1
        assert u0 == closed
        assert u0 >= prev
        prev = u0


def test_delta_terms_a_posteriori():
    for p in odd_primes_up_to(200):
        if p < 5:
            continue
        u0 = compute_u0(p)
        assert all(d >= 0 for d in delta_terms(p, u0))
        if u0 > 0:
            assert any(d < 0 for d in delta_terms(p, u0 - 1))


def test_middle_candidates_satisfy_congruence():
    for p in (13, 37, 61):
        u0 = compute_u0(p)
        cands = middle_b2_candidates(p, 1, u0)
        brute = [u for u in range(1, u0) if u % p and pow(3, (p - 1) // 2, p * p) * pow(u, p - 1, p * p) % (p * p) == 1]
        assert cands == brute


def test_middle_case_examples():
    o = middle_case(7)
    assert o.status == NO_SOLUTION and not any(isinstance(e, Search) for e in o.evidence)
    for p in (13, 37):
        o = middle_case(p)
        assert o.status == NO_SOLUTION
        assert any(isinstance(e, Search) and e.complete for e in o.evidence)
    o = middle_case(5)
    assert o.status == NO_SOLUTION and all(replay(c) for c in o.certificates)


def test_middle_case_zero_search_off_residue_one():
    for p in odd_primes_up_to(2000):
        if p >= 5 and p % 12 != 1:
            o = middle_case(p)
            assert o.status == NO_SOLUTION
            assert not any(isinstance(e, Search) for e in o.evidence)


def test_v1_case_examples():
    o = v1_case(3109, 5)
    assert o.status == SOLUTIONS and list(o.solutions) == [Solution(3109, 1, 627, 29, 5)]
    o = v1_case(5, 3)
    assert o.status == NO_SOLUTION and o.certificates[0].s == 5
    o = v1_case(7, 3)
    assert list(o.solutions) == [Solution(7, 1, 3, 5, 3)]
    with pytest.raises(ValueError, match="exponent exceeds bound"):
        v1_case(7, 11)


def test_lift_composite():
    assert lift_composite([Solution(7, 1, 3, 5, 3)]) == [Solution(7, 1, 3, 5, 3)]
    assert lift_composite([]) == []
    # 3*x^2 + 2*d^2 = 4^3 = 2^6 (synthetic, lifting does not re-verify)
    out = lift_composite([Solution(5, 1, 1, 4, 3)])
    assert Solution(5, 1, 1, 2, 6) in out and len(out) == 2
    out = lift_composite([Solution(5, 1, 1, 64, 3)])
    assert {(s.y, s.n) for s in out} == {(64, 3), (8, 6), (4, 9), (2, 18)}


def test_report_roundtrip():
    r = solve_prime(79)
    again = CaseReport.from_dict(r.to_dict())
    assert again.to_dict() == r.to_dict()


def test_solutions_verify(scan500):
    for r in scan500.reports:
        for o in r.outcomes:
            assert all(verify_solution(s) for s in o.solutions)
