"""The polynomials f_n, the Lehmer terms they compute, and solution reconstruction.

For a primitive solution of 3x^2 + 2d^2 = y^n with n an odd prime there is
gamma = 3u + v*sqrt(-6) with

    3x + d*sqrt(-6) = gamma^n / 3^((n-1)/2),      y = 3u^2 + 2v^2,

and the Lehmer term of alpha = gamma/sqrt(3), beta = conj(gamma)/sqrt(3) is
the integer f_n(u, v) = d / v.  Everything here stays inside Z[sqrt(-6)];
the square root of 3 is never materialised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .ntheory import is_prime, legendre
from .quadring import QuadInt, QuadIntMod, exact_div_scalar, qpow, qpow_mod

# numpy residue sweeps keep every intermediate below 7*s^2 < 2^63
MAX_VECTOR_MODULUS = 1 << 30


@dataclass(frozen=True)
class FnPoly:
    n: int
    coeffs: tuple[int, ...]

    def __call__(self, u: int, v: int = 1) -> int:
        # Horner in u^2; coefficient i carries v^(2i)
        uu, vv = u * u, v * v
        acc, vpow = 0, 1
        for c in self.coeffs:
            acc = acc * uu + c * vpow
            vpow *= vv
        return acc

    def eval_mod(self, u: int, v: int, m: int) -> int:
        uu, vv = u * u % m, v * v % m
        acc, vpow = 0, 1
        for c in self.coeffs:
            acc = (acc * uu + c * vpow) % m
            vpow = vpow * vv % m
        return acc


def _check_odd(n: int) -> None:
    if n < 1 or n % 2 == 0:
        raise ValueError("f_n defined for odd n only")


@lru_cache(maxsize=64)
def fn_poly(n: int) -> FnPoly:
    _check_odd(n)
    half = (n - 1) // 2
    coeffs = tuple(
        math.comb(n, 2 * i + 1) * (-2) ** i * 3 ** (half - i) for i in range(half + 1)
    )
    return FnPoly(n, coeffs)


def fn_eval(n: int, u: int, v: int = 1) -> int:
    return fn_poly(n)(u, v)


def fn_eval_mod(n: int, u: int, v: int, m: int) -> int:
    """f_n(u, v) mod m.

    Uses the imaginary part of gamma^n when v * 3^((n-1)/2) is invertible
    mod m, otherwise Horner on the coefficient vector.
    """
    if m < 2:
        raise ValueError("fn_eval_mod: modulus must be >= 2")
    _check_odd(n)
    half = (n - 1) // 2
    if math.gcd(3 * v, m) == 1:
        g = qpow_mod(QuadIntMod(3 * u, v, m), n)
        scale = pow(v * pow(3, half, m), -1, m)
        return g.c * scale % m
    return fn_poly(n).eval_mod(u, v, m)


@dataclass(frozen=True)
class LehmerSeed:
    """gamma = 3u + v*sqrt(-6), normalised so that v > 0."""

    u: int
    v: int

    def __post_init__(self) -> None:
        if self.v == 0:
            raise ValueError("LehmerSeed: v must be nonzero")
        if self.v < 0:
            object.__setattr__(self, "u", -self.u)
            object.__setattr__(self, "v", -self.v)

    @property
    def gamma(self) -> QuadInt:
        return QuadInt(3 * self.u, self.v)

    @property
    def y(self) -> int:
        return 3 * self.u * self.u + 2 * self.v * self.v

    def lehmer_parameters(self) -> tuple[int, int]:
        """((alpha+beta)^2, alpha*beta) = (12u^2, 3u^2 + 2v^2)."""
        return 12 * self.u * self.u, self.y


def lehmer_term(n: int, seed: LehmerSeed) -> int:
    """(alpha^n - beta^n)/(alpha - beta) for odd n, via gamma^n."""
    _check_odd(n)
    g = qpow(seed.gamma, n)
    # gamma^n - conj(gamma)^n = 2 c sqrt(-6) and alpha - beta = 2 v sqrt(-2)
    q, r = divmod(g.c, seed.v * 3 ** ((n - 1) // 2))
    if r:
        raise ArithmeticError("non-integral Lehmer term")
    return q


def bound_Bp(p: int) -> int:
    if p in (2, 3):
        raise ValueError("outside lemma hypotheses: p must not be 2 or 3")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    B = p - 1 if legendre(-6, p) == 1 else p + 1
    return max(7, B)


@dataclass(frozen=True)
class Solution:
    """A primitive solution, stored as in the table: x is |x|."""

    p: int
    b: int
    x: int
    y: int
    n: int

    def key(self) -> tuple[int, int, int, int, int]:
        return (self.p, self.n, self.b, self.y, self.x)

    def as_row(self) -> tuple[int, int, int, int, int]:
        return (self.p, self.b, self.x, self.y, self.n)

    def to_dict(self) -> dict:
        return {"p": self.p, "b": self.b, "x": self.x, "y": self.y, "n": self.n}

    @classmethod
    def from_dict(cls, data: dict) -> Solution:
        vals = {}
        for k in ("p", "b", "x", "y", "n"):
            v = data[k]
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"field {k!r} must be an integer")
            vals[k] = v
        return cls(**vals)


def verify_solution(s: Solution) -> bool:
    if s.n < 3 or s.b < 0 or s.x == 0 or s.y < 2:
        return False
    if not is_prime(s.p):
        return False
    if math.gcd(s.x, s.y) != 1:
        return False
    return 3 * s.x * s.x + 2 * s.p ** (2 * s.b) == s.y**s.n


def reconstruct_solution(n: int, seed: LehmerSeed, p: int, b: int) -> Optional[Solution]:
    half = (n - 1) // 2
    w = exact_div_scalar(qpow(seed.gamma, n), 3**half)
    if w is None or abs(w.c) != p**b or w.a % 3:
        return None
    sol = Solution(p, b, abs(w.a) // 3, seed.y, n)
    return sol if verify_solution(sol) else None


# --- vectorised residue images ------------------------------------------


def _check_vector_modulus(s: int) -> None:
    if not 2 <= s <= MAX_VECTOR_MODULUS:
        raise ValueError(f"modulus {s} outside vectorised range")


def _fn_values_gamma(n: int, s: int) -> np.ndarray:
    # gamma^n over all u at once; needs 3 invertible mod s
    u = np.arange(s, dtype=np.int64)
    a, c = (3 * u) % s, np.ones(s, dtype=np.int64) % s
    ra, rc = np.ones(s, dtype=np.int64) % s, np.zeros(s, dtype=np.int64)
    e = n
    while e:
        if e & 1:
            ra, rc = (ra * a - 6 * ((rc * c) % s)) % s, (ra * c + rc * a) % s
        e >>= 1
        if e:
            a, c = (a * a - 6 * ((c * c) % s)) % s, (2 * a * c) % s
    scale = pow(pow(3, (n - 1) // 2, s), -1, s)
    return (rc * scale) % s


def _fn_values_matrix(n: int, s: int) -> np.ndarray:
    # odd-index recurrence w_{j+1} = A w_j - B w_{j-1}, powered as a 2x2 matrix
    u = np.arange(s, dtype=np.int64)
    uu = (u * u) % s
    R = (12 * uu) % s
    Q = (3 * uu + 2) % s
    A = (R - 2 * Q) % s
    B = (Q * Q) % s
    c0 = np.ones(s, dtype=np.int64) % s
    c1 = (R - Q) % s
    j = (n - 1) // 2
    if j == 0:
        return c0
    one = np.ones(s, dtype=np.int64) % s
    zero = np.zeros(s, dtype=np.int64)
    m = [A, (-B) % s, one, zero]
    r = [one, zero, zero, one]

    def mul(x, y):
        return [
            (x[0] * y[0] + x[1] * y[2]) % s,
            (x[0] * y[1] + x[1] * y[3]) % s,
            (x[2] * y[0] + x[3] * y[2]) % s,
            (x[2] * y[1] + x[3] * y[3]) % s,
        ]

    e = j - 1
    while e:
        if e & 1:
            r = mul(r, m)
        e >>= 1
        if e:
            m = mul(m, m)
    return (r[0] * c1 + r[1] * c0) % s


def fn_values_mod(n: int, s: int, route: str = "auto") -> np.ndarray:
    """Array of f_n(u, 1) mod s for u = 0..s-1."""
    _check_odd(n)
    _check_vector_modulus(s)
    if route == "auto":
        route = "gamma" if s % 3 else "matrix"
    if route == "gamma":
        if s % 3 == 0:
            raise ValueError("gamma route needs gcd(3, s) = 1")
        return _fn_values_gamma(n, s)
    if route == "matrix":
        return _fn_values_matrix(n, s)
    raise ValueError(f"unknown route {route!r}")


@lru_cache(maxsize=4096)
def _image_mask_cached(n: int, s: int) -> bytes:
    mask = np.zeros(s, dtype=bool)
    mask[fn_values_mod(n, s)] = True
    return mask.tobytes()


def fn_image_mask(n: int, s: int) -> np.ndarray:
    """Boolean mask over residues mod s: True where f_n(u, 1) hits it."""
    return np.frombuffer(_image_mask_cached(n, s), dtype=bool)


def fn_image(n: int, s: int) -> frozenset[int]:
    return frozenset(int(r) for r in np.flatnonzero(fn_image_mask(n, s)))
