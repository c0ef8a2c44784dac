"""Direct searches for seeds solving f_n(u, v) = ±p^b.

The v = 1 searches split the u-axis at the largest real root of f_n(., 1).
f_n(u, 1) is the Lehmer term of gamma = 3u + sqrt(-6), so it vanishes
exactly when (gamma / conj(gamma))^n = 1, i.e. at u = sqrt(2/3) cot(k pi/n),
k = 1..(n-1)/2.  These are all (n-1)/2 roots in u^2, so beyond
u_1 = sqrt(2/3) cot(pi/n) the polynomial is positive and increasing.  Below
u_1 only finitely many u exist, so that part of the search is exhaustive
for every b; above it the target -p^b is impossible and +p^b is searched
for b up to a bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lehmer import LehmerSeed, fn_eval, fn_eval_mod
from .ntheory import integer_sqrt


@dataclass(frozen=True)
class SearchResult:
    hits: tuple[tuple[LehmerSeed, int], ...]   # (seed, b)
    complete: bool                             # False when b (or u) was capped
    examined: int = 0


def p_adic_exponent(value: int, p: int) -> int | None:
    """b >= 1 with value == p^b, else None."""
    if value < p:
        return None
    b = 0
    while value % p == 0:
        value //= p
        b += 1
    return b if value == 1 else None


def solve_n3(p: int, sign: int, b_max: int) -> SearchResult:
    """9u^2 - 2 = sign * p^b."""
    hits = []
    if sign > 0:
        for b in range(1, b_max + 1):
            num = p**b + 2
            if num % 9 == 0:
                u, exact = integer_sqrt(num // 9)
                if exact and u > 0:
                    hits.append((LehmerSeed(u, 1), b))
        return SearchResult(tuple(hits), complete=False, examined=b_max)
    # 9u^2 - 2 >= -2, so only p^b <= 2 could work
    b = 1
    while p**b <= 2:
        num = 2 - p**b
        if num % 9 == 0:
            u, exact = integer_sqrt(num // 9)
            if exact and u > 0:
                hits.append((LehmerSeed(u, 1), b))
        b += 1
    return SearchResult(tuple(hits), complete=True, examined=b - 1)


def _n5_seeds(rhs: int) -> list[int]:
    # (15u^2 - 10)^2 = rhs; return the positive u
    if rhs < 0:
        return []
    X, exact = integer_sqrt(rhs)
    if not exact:
        return []
    out = []
    for num in {10 + X, 10 - X}:
        if num > 0 and num % 15 == 0:
            u, ok = integer_sqrt(num // 15)
            if ok and u > 0:
                out.append(u)
    return sorted(out)


def solve_n5(p: int, sign: int, b_max: int) -> SearchResult:
    """45u^4 - 60u^2 + 4 = sign * p^b, i.e. (15u^2 - 10)^2 - 80 = 5 sign p^b."""
    hits = []
    if sign > 0:
        for b in range(1, b_max + 1):
            for u in _n5_seeds(80 + 5 * p**b):
                hits.append((LehmerSeed(u, 1), b))
        return SearchResult(tuple(hits), complete=False, examined=b_max)
    # the left side is at least -16, so 5 p^b <= 80
    b = 1
    while 5 * p**b <= 80:
        for u in _n5_seeds(80 - 5 * p**b):
            hits.append((LehmerSeed(u, 1), b))
        b += 1
    return SearchResult(tuple(hits), complete=True, examined=b - 1)


def largest_root_bound(n: int) -> int:
    """An integer strictly above every real root of f_n(u, 1)."""
    if n < 3:
        return 1
    return int(math.sqrt(2.0 / 3.0) / math.tan(math.pi / n)) + 2


def search_v1(n: int, p: int, sign: int, b_max: int, u_cap: int = 10**4) -> SearchResult:
    """All u > 0 with f_n(u, 1) = sign * p^b (b >= 1), exhaustive below the roots."""
    hits = []
    complete = True
    U1 = largest_root_bound(n)
    upper = U1
    if U1 > u_cap:
        upper, complete = u_cap, False
    examined = 0
    for u in range(1, upper + 1):
        examined += 1
        if fn_eval_mod(n, u, 1, p):
            continue
        b = p_adic_exponent(sign * fn_eval(n, u, 1), p)
        if b is not None:
            hits.append((LehmerSeed(u, 1), b))
    if sign < 0:
        # f_n(u, 1) > 0 past the roots
        return SearchResult(tuple(hits), complete, examined)
    f_lo = fn_eval(n, U1 + 1, 1)
    for b in range(1, b_max + 1):
        target = p**b
        if f_lo > target:
            continue
        lo, hi = U1 + 1, U1 + 2
        while fn_eval(n, hi, 1) < target:
            lo, hi = hi, 2 * hi
        while lo < hi:
            mid = (lo + hi) // 2
            if fn_eval(n, mid, 1) < target:
                lo = mid + 1
            else:
                hi = mid
        examined += 1
        if fn_eval(n, lo, 1) == target:
            hits.append((LehmerSeed(lo, 1), b))
    return SearchResult(tuple(hits), complete=False, examined=examined)


def search_defective(n: int, p: int, sign: int, b_max: int) -> SearchResult:
    """f_n(u, p^b) = sign for 1 <= b <= b_max (n = 3 or 5)."""
    hits = []
    for b in range(1, b_max + 1):
        v = p**b
        if n == 3:
            num = sign + 2 * v * v
            if num > 0 and num % 9 == 0:
                u, exact = integer_sqrt(num // 9)
                if exact and u > 0:
                    hits.append((LehmerSeed(u, v), b))
        elif n == 5:
            # (15u^2 - 10v^2)^2 = 80 v^4 + 5 sign
            X, exact = integer_sqrt(80 * v**4 + 5 * sign)
            if not exact:
                continue
            for num in {10 * v * v + X, 10 * v * v - X}:
                if num > 0 and num % 15 == 0:
                    u, ok = integer_sqrt(num // 15)
                    if ok and u > 0:
                        hits.append((LehmerSeed(u, v), b))
        else:
            raise ValueError("search_defective handles n = 3, 5 only")
    return SearchResult(tuple(hits), complete=False, examined=b_max)
