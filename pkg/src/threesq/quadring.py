"""Arithmetic in Z[sqrt(-6)], exact and reduced modulo an integer."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

D = -6


@dataclass(frozen=True)
class QuadInt:
    """a + c*sqrt(-6)."""

    a: int
    c: int = 0

    def __add__(self, other: QuadInt) -> QuadInt:
        return QuadInt(self.a + other.a, self.c + other.c)

    def __sub__(self, other: QuadInt) -> QuadInt:
        return QuadInt(self.a - other.a, self.c - other.c)

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.a, -self.c)

    def __mul__(self, other: QuadInt) -> QuadInt:
        return qmul(self, other)

    def __pow__(self, e: int) -> QuadInt:
        return qpow(self, e)

    def conj(self) -> QuadInt:
        return QuadInt(self.a, -self.c)

    def norm(self) -> int:
        return qnorm(self)

    def reduce(self, m: int) -> QuadIntMod:
        return QuadIntMod(self.a % m, self.c % m, m)

    def __str__(self) -> str:
        return f"{self.a}{self.c:+}√-6"


ONE = QuadInt(1, 0)


def qmul(x: QuadInt, y: QuadInt) -> QuadInt:
    return QuadInt(x.a * y.a + D * x.c * y.c, x.a * y.c + x.c * y.a)


def qpow(x: QuadInt, e: int) -> QuadInt:
    if e < 0:
        raise ValueError("qpow: negative exponent")
    result = ONE
    while e:
        if e & 1:
            result = qmul(result, x)
        e >>= 1
        if e:
            x = qmul(x, x)
    return result


def qnorm(x: QuadInt) -> int:
    return x.a * x.a - D * x.c * x.c


def exact_div_scalar(x: QuadInt, k: int) -> Optional[QuadInt]:
    if k == 0:
        raise ZeroDivisionError("exact_div_scalar by zero")
    if x.a % k or x.c % k:
        return None
    return QuadInt(x.a // k, x.c // k)


@dataclass(frozen=True)
class QuadIntMod:
    a: int
    c: int
    m: int

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError("QuadIntMod: modulus must be >= 2")
        if not (0 <= self.a < self.m and 0 <= self.c < self.m):
            object.__setattr__(self, "a", self.a % self.m)
            object.__setattr__(self, "c", self.c % self.m)

    def __mul__(self, other: QuadIntMod) -> QuadIntMod:
        return qmul_mod(self, other)

    def __pow__(self, e: int) -> QuadIntMod:
        return qpow_mod(self, e)


def qmul_mod(x: QuadIntMod, y: QuadIntMod) -> QuadIntMod:
    if x.m != y.m:
        raise ValueError("moduli differ")
    m = x.m
    return QuadIntMod((x.a * y.a + D * x.c * y.c) % m, (x.a * y.c + x.c * y.a) % m, m)


def qpow_mod(x: QuadIntMod, e: int) -> QuadIntMod:
    if e < 0:
        raise ValueError("qpow_mod: negative exponent")
    m = x.m
    ra, rc = 1 % m, 0
    a, c = x.a, x.c
    while e:
        if e & 1:
            ra, rc = (ra * a + D * rc * c) % m, (ra * c + rc * a) % m
        e >>= 1
        if e:
            a, c = (a * a + D * c * c) % m, (2 * a * c) % m
    return QuadIntMod(ra, rc, m)
