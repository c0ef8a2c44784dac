"""Scalar number theory helpers shared by the rest of the package."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional

# Deterministic Miller-Rabin: these bases are exact for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    if n < 47 * 47:
        return True
    if n >= _MR_LIMIT:
        raise ValueError(f"is_prime: {n} is beyond the deterministic range")
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeList:
    bound: int
    primes: tuple[int, ...]

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, q: object) -> bool:
        return q in self.primes


def primes_up_to(bound: int) -> PrimeList:
    if bound < 2:
        return PrimeList(bound, ())
    sieve = bytearray(b"\x01") * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for q in range(2, math.isqrt(bound) + 1):
        if sieve[q]:
            sieve[q * q :: q] = b"\x00" * len(range(q * q, bound + 1, q))
    return PrimeList(bound, tuple(i for i in range(bound + 1) if sieve[i]))


def odd_primes_up_to(bound: int) -> list[int]:
    return [q for q in primes_up_to(bound) if q > 2]


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"invalid modulus {p}: need an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def mod_pow(a: int, e: int, m: int) -> int:
    if m < 2:
        raise ValueError("mod_pow: modulus must be >= 2")
    if e < 0:
        raise ValueError("mod_pow: exponent must be nonnegative")
    return pow(a, e, m)


def factorize(n: int) -> dict[int, int]:
    """Trial division; only meant for the small moduli used by the sieves."""
    if n < 1:
        raise ValueError("factorize: need n >= 1")
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def lcm(*xs: int) -> int:
    return reduce(lambda a, b: a // math.gcd(a, b) * b, xs, 1)


def carmichael_lambda(m: int) -> int:
    parts = []
    for q, e in factorize(m).items():
        if q == 2 and e >= 3:
            parts.append(2 ** (e - 2))
        else:
            parts.append((q - 1) * q ** (e - 1))
    return lcm(*parts)


def multiplicative_order(a: int, m: int) -> int:
    if m < 2:
        raise ValueError("multiplicative_order: modulus must be >= 2")
    if math.gcd(a, m) != 1:
        raise ValueError(f"not a unit: gcd({a}, {m}) != 1")
    t = carmichael_lambda(m)
    for q in factorize(t):
        while t % q == 0 and pow(a, t // q, m) == 1:
            t //= q
    return t


def integer_sqrt(n: int) -> tuple[int, bool]:
    if n < 0:
        raise ValueError("integer_sqrt of a negative number")
    r = math.isqrt(n)
    return r, r * r == n


def integer_nthroot(y: int, k: int) -> tuple[int, bool]:
    """floor(y ** (1/k)) by Newton iteration, and whether it is exact."""
    if y < 0 or k < 1:
        raise ValueError("integer_nthroot: need y >= 0, k >= 1")
    if y < 2 or k == 1:
        return y, True
    x = 1 << (y.bit_length() // k + 1)
    while True:
        nxt = ((k - 1) * x + y // x ** (k - 1)) // k
        if nxt >= x:
            break
        x = nxt
    while x**k > y:
        x -= 1
    while (x + 1) ** k <= y:
        x += 1
    return x, x**k == y


def is_perfect_power(y: int) -> Optional[tuple[int, int]]:
    """Return (base, k) with y = base**k and k maximal (k >= 2), else None."""
    if y < 2:
        raise ValueError("is_perfect_power: need y >= 2")
    for k in range(y.bit_length(), 1, -1):
        r, exact = integer_nthroot(y, k)
        if exact and r >= 2:
            return r, k
    return None


def prime_power_parts(d: int) -> Optional[tuple[int, int]]:
    """(p, b) when d = p**b with p prime and b >= 1."""
    if d < 2:
        return None
    found = is_perfect_power(d)
    base, b = found if found else (d, 1)
    return (base, b) if is_prime(base) else None
