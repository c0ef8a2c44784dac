"""Brute-force enumeration of primitive solutions of 3x^2 + 2d^2 = y^n.

Independent of the Lehmer machinery: it walks (n, y, x) and tests whether
(y^n - 3x^2) / 2 is a perfect square, using nothing beyond integer square
roots and primality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .lehmer import Solution
from .ntheory import integer_sqrt, prime_power_parts

ANY = "any"
PRIME_POWER = "prime_power"
FIXED = "fixed"


@dataclass(frozen=True)
class OracleQuery:
    y_max: int
    n_set: frozenset[int]
    d_filter: str = ANY
    p_bound: Optional[int] = None
    d: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_set", frozenset(self.n_set))
        if self.y_max < 2:
            raise ValueError("y_max must be at least 2")
        if not self.n_set or min(self.n_set) < 2:
            raise ValueError("n_set must be nonempty with every n >= 2")
        if self.d_filter not in (ANY, PRIME_POWER, FIXED):
            raise ValueError(f"unknown d_filter {self.d_filter!r}")
        if self.d_filter == FIXED and (self.d is None or self.d < 1):
            raise ValueError("fixed filter needs d >= 1")


@dataclass(frozen=True)
class OracleHit:
    x: int
    y: int
    d: int
    n: int
    p: Optional[int] = None
    b: Optional[int] = None

    def sort_key(self) -> tuple:
        return (self.p if self.p is not None else self.d, self.n, self.y, self.x, self.d)

    def to_solution(self) -> Solution:
        if self.p is None or self.b is None:
            raise ValueError(f"d = {self.d} is not a prime power")
        return Solution(self.p, self.b, self.x, self.y, self.n)


def _accept(q: OracleQuery, x: int, y: int, d: int, n: int) -> Optional[OracleHit]:
    if d == 1:
        # b = 0: every prime base fits, report without one
        if q.d_filter == PRIME_POWER:
            return None
        return OracleHit(x, y, d, n)
    parts = prime_power_parts(d)
    if q.d_filter == PRIME_POWER:
        if parts is None or (q.p_bound is not None and parts[0] > q.p_bound):
            return None
    if parts is None:
        return OracleHit(x, y, d, n)
    return OracleHit(x, y, d, n, parts[0], parts[1])


def _scan_fixed(q: OracleQuery) -> list[OracleHit]:
    out = []
    two_d2 = 2 * q.d * q.d
    for n in sorted(q.n_set):
        for y in range(2, q.y_max + 1):
            num = y**n - two_d2
            if num <= 0 or num % 3:
                continue
            x, exact = integer_sqrt(num // 3)
            if exact and x > 0 and math.gcd(x, y) == 1:
                hit = _accept(q, x, y, q.d, n)
                if hit is not None:
                    out.append(hit)
    return out


def enumerate_solutions(q: OracleQuery) -> list[OracleHit]:
    """All primitive hits with x > 0, d >= 1, n in n_set and y <= y_max."""
    if q.d_filter == FIXED:
        return sorted(_scan_fixed(q), key=OracleHit.sort_key)
    out = []
    for n in sorted(q.n_set):
        for y in range(2, q.y_max + 1):
            yn = y**n
            x = 1
            while 3 * x * x < yn:
                rem = yn - 3 * x * x
                if rem % 2 == 0 and math.gcd(x, y) == 1:
                    d, exact = integer_sqrt(rem // 2)
                    if exact and d >= 1:
                        hit = _accept(q, x, y, d, n)
                        if hit is not None:
                            out.append(hit)
                x += 1
    return sorted(out, key=OracleHit.sort_key)


enumerate = enumerate_solutions
