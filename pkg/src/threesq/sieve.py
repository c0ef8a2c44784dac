"""Congruence sieves that certify f_n(u) = ±p^b has no solutions.

Every certificate is replayable: `replay` re-derives the conclusion from the
stored moduli with its own residue computation (scalar gamma powering for
small moduli, vectorised gamma or matrix powering above), independent of the
recurrence sweep that found it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .lehmer import MAX_VECTOR_MODULUS, fn_eval_mod, fn_image_mask, fn_poly, fn_values_mod
from .ntheory import lcm, multiplicative_order, primes_up_to

BASIC = "BasicModulus"
ORDER = "OrderSieve"
TWO_VAR = "TwoVariable"
KINDS = (BASIC, ORDER, TWO_VAR)

S_MAX = 1000
T_MAX = 64
L_BOUND = 10**6

# replay evaluates residues one by one below this size, vectorised above
_SCALAR_REPLAY_LIMIT = 64


@dataclass(frozen=True)
class SieveCertificate:
    """Proof that an equation has no solutions, checkable from stored data.

    BasicModulus/OrderSieve: f_n(u, 1) = sign * p^b has no solution with
    b >= 1 for each sign in `signs`.  TwoVariable: f_n(u, v_base * p^k) =
    target has no solution with k >= 0.
    """

    kind: str
    p: int
    n: int
    signs: tuple[int, ...] = (1,)
    s: Optional[int] = None
    t: Optional[int] = None
    l: Optional[int] = None
    contributing: tuple[tuple[int, int], ...] = ()
    target: Optional[int] = None
    v_base: Optional[int] = None

    @property
    def conclusion(self) -> str:
        if self.kind == TWO_VAR:
            return f"no solutions of f_{self.n}(u, {self.v_base}*{self.p}^k) = {self.target}, k >= 0"
        sg = "".join("+" if e > 0 else "-" for e in self.signs)
        return f"no solutions of f_{self.n}(u) = ({sg}){self.p}^b with b >= 1"

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "p": self.p, "n": self.n}
        if self.kind == BASIC:
            out.update(signs=list(self.signs), s=self.s)
        elif self.kind == ORDER:
            out.update(
                signs=list(self.signs),
                t=self.t,
                l=self.l,
                contributing=[list(pair) for pair in self.contributing],
            )
        else:
            out.update(target=self.target, v_base=self.v_base, s=self.s)
        out["conclusion"] = self.conclusion
        return out

    @classmethod
    def from_dict(cls, data: dict) -> SieveCertificate:
        kind = data["kind"]
        if kind not in KINDS:
            raise ValueError(f"unknown certificate kind {kind!r}")
        common = dict(kind=kind, p=int(data["p"]), n=int(data["n"]))
        if kind == BASIC:
            return cls(**common, signs=tuple(int(e) for e in data["signs"]), s=int(data["s"]))
        if kind == ORDER:
            return cls(
                **common,
                signs=tuple(int(e) for e in data["signs"]),
                t=int(data["t"]),
                l=int(data["l"]),
                contributing=tuple((int(a), int(b)) for a, b in data["contributing"]),
            )
        return cls(
            **common,
            signs=(),
            target=int(data["target"]),
            v_base=int(data["v_base"]),
            s=int(data["s"]),
        )


def power_residues(p: int, s: int, start: int = 1) -> set[int]:
    """{p^k mod s : k >= start}, following the (eventually periodic) orbit."""
    seen: list[int] = []
    index: dict[int, int] = {}
    r = pow(p, start, s)
    while r not in index:
        index[r] = len(seen)
        seen.append(r)
        r = r * p % s
    return set(seen)


def _targets(p: int, s: int, sign: int) -> set[int]:
    return {sign * r % s for r in power_residues(p, s)}


def _basic_moduli(p: int) -> list[int]:
    return [s for s in (p, p - 1, p + 1) if s >= 3]


# --- basic sieve ---------------------------------------------------------


def basic_sieve_sweep(p: int, ns: Sequence[int]) -> dict[int, dict[int, list[int]]]:
    """For each n in `ns` and sign, the moduli s in (p, p-1, p+1) that kill it.

    One pass per modulus over all u mod s, stepping the odd-index Lehmer
    recurrence u_{k+2} = (R - 2Q) u_k - Q^2 u_{k-2} with R = 12u^2,
    Q = 3u^2 + 2, so that every requested n is read off along the way.
    """
    wanted = sorted(set(ns))
    out = {n: {1: [], -1: []} for n in wanted}
    if not wanted:
        return out
    for n in wanted:
        if n < 3 or n % 2 == 0:
            raise ValueError("basic_sieve_sweep: n must be odd and >= 3")
    nmax = wanted[-1]
    wanted_set = set(wanted)
    for s in _basic_moduli(p):
        masks = {}
        for sign in (1, -1):
            m = np.zeros(s, dtype=bool)
            m[list(_targets(p, s, sign))] = True
            masks[sign] = m
        same = bool(np.array_equal(masks[1], masks[-1]))
        u = np.arange(s, dtype=np.int64)
        uu = (u * u) % s
        R = (12 * uu) % s
        Q = (3 * uu + 2) % s
        A = (R - 2 * Q) % s
        B = (Q * Q) % s
        prev = np.ones(s, dtype=np.int64) % s
        cur = (R - Q) % s
        k = 3
        while True:
            if k in wanted_set:
                hit_pos = bool(masks[1][cur].any())
                hit_neg = hit_pos if same else bool(masks[-1][cur].any())
                if not hit_pos:
                    out[k][1].append(s)
                if not hit_neg:
                    out[k][-1].append(s)
            if k >= nmax:
                break
            prev, cur = cur, (A * cur - B * prev) % s
            k += 2
    return out


def basic_sieve(p: int, n: int, signs: Iterable[int] = (1, -1)) -> Optional[SieveCertificate]:
    """Certificate from one of s = p, p-1, p+1 killing every requested sign."""
    signs = tuple(signs)
    if p <= 3:
        raise ValueError("basic_sieve needs p > 3")
    for s in _basic_moduli(p):
        img = fn_image_mask(n, s)
        if all(not img[list(_targets(p, s, e))].any() for e in signs):
            return SieveCertificate(BASIC, p, n, signs=signs, s=s)
    return None


def certificate_from_sweep(
    p: int, n: int, killers: dict[int, list[int]]
) -> list[SieveCertificate]:
    """Fewest BasicModulus certificates covering the signs the sweep killed."""
    both = [s for s in killers[1] if s in killers[-1]]
    if both:
        return [SieveCertificate(BASIC, p, n, signs=(1, -1), s=both[0])]
    certs = []
    for sign in (1, -1):
        if killers[sign]:
            certs.append(SieveCertificate(BASIC, p, n, signs=(sign,), s=killers[sign][0]))
    return certs


# --- W sets and the order sieve -----------------------------------------


@dataclass(frozen=True)
class WSet:
    s: int
    t_s: int
    sign: int
    members: frozenset[int] = field(default_factory=frozenset)

    @property
    def usable(self) -> bool:
        # t_s = 1 gives an empty index range and no information
        return self.t_s >= 2

    @property
    def empty(self) -> bool:
        return not self.members


def w_set(s: int, p: int, n: int, sign: int = 1) -> WSet:
    if math.gcd(s, p) != 1:
        raise ValueError(f"w_set: gcd({s}, {p}) != 1")
    if s < 3:
        raise ValueError("w_set: need s >= 3")
    t_s = multiplicative_order(p, s)
    img = fn_image_mask(n, s)
    members = frozenset(
        r for r in (sign * pow(p, k, s) % s for k in range(1, t_s)) if img[r]
    )
    return WSet(s, t_s, sign, members)


@lru_cache(maxsize=256)
def default_s_candidates(p: int, s_max: int = S_MAX, t_max: int = T_MAX) -> tuple[int, ...]:
    out = []
    for s in range(3, s_max + 1):
        if math.gcd(s, p) != 1:
            continue
        if 2 <= multiplicative_order(p, s) <= t_max:
            out.append(s)
    return tuple(out)


@lru_cache(maxsize=4)
def _prime_list(bound: int) -> tuple[int, ...]:
    return primes_up_to(bound).primes


def _l_candidates(p: int, t: int, l_bound: int) -> list[int]:
    """Prime powers 3 <= l <= l_bound with l | p^t - 1, ascending."""
    found = []
    for q in _prime_list(l_bound):
        if p % q == 0 or pow(p, t, q) != 1:
            continue
        ql = q
        while ql <= l_bound:
            if ql >= 3 and pow(p, t, ql) == 1:
                found.append(ql)
            ql *= q
    return sorted(found)


def find_l(p: int, n: int, t: int, sign: int, l_bound: int = L_BOUND) -> Optional[int]:
    # a composite l works iff one of its prime-power parts does (CRT on u)
    for l in _l_candidates(p, t, l_bound):
        if not fn_image_mask(n, l)[sign % l]:
            return l
    return None


def order_sieve(
    p: int,
    n: int,
    s_candidates: Optional[Sequence[int]] = None,
    l_bound: int = L_BOUND,
    sign: int = 1,
) -> Optional[SieveCertificate]:
    """Force t | b from empty W-sets, then find l | p^t - 1 missing sign mod l."""
    if s_candidates is None:
        s_candidates = default_s_candidates(p)
    t = 1
    contributing: list[tuple[int, int]] = []
    for s in s_candidates:
        w = w_set(s, p, n, sign)
        if not w.usable or not w.empty:
            continue
        new_t = lcm(t, w.t_s)
        if new_t == t:
            continue
        t = new_t
        contributing.append((s, w.t_s))
        l = find_l(p, n, t, sign, l_bound)
        if l is not None:
            return SieveCertificate(
                ORDER, p, n, signs=(sign,), t=t, l=l, contributing=tuple(contributing)
            )
    return None


# --- two-variable sieve --------------------------------------------------


def _v_residues(p: int, v_base: int, s: int) -> set[int]:
    return {v_base * r % s for r in power_residues(p, s, start=0)}


def two_var_sieve(target: int, n: int, p: int, v_base: int, s: int) -> Optional[SieveCertificate]:
    """Certificate that f_n(u, v_base * p^k) = target is impossible mod s."""
    if s < 3:
        raise ValueError("two_var_sieve: need s >= 3")
    goal = target % s
    for v in _v_residues(p, v_base, s):
        for u in range(s):
            if fn_eval_mod(n, u, v, s) == goal:
                return None
    return SieveCertificate(TWO_VAR, p, n, signs=(), target=target, v_base=v_base, s=s)


def search_two_var(
    target: int, n: int, p: int, v_base: int, preferred: Sequence[int] = (), s_max: int = 64
) -> Optional[SieveCertificate]:
    seen = set()
    for s in list(preferred) + list(range(3, s_max + 1)):
        if s in seen:
            continue
        seen.add(s)
        cert = two_var_sieve(target, n, p, v_base, s)
        if cert is not None:
            return cert
    return None


# --- replay --------------------------------------------------------------


@lru_cache(maxsize=4096)
def _replay_image_bytes(n: int, s: int) -> bytes:
    mask = np.zeros(s, dtype=bool)
    if s <= _SCALAR_REPLAY_LIMIT:
        for u in range(s):
            mask[fn_eval_mod(n, u, 1, s)] = True
    else:
        if s > MAX_VECTOR_MODULUS:
            raise ValueError("modulus too large to replay")
        mask[fn_values_mod(n, s, route="gamma" if s % 3 else "matrix")] = True
    return mask.tobytes()


def _replay_image(n: int, s: int) -> np.ndarray:
    return np.frombuffer(_replay_image_bytes(n, s), dtype=bool)


def replay(cert: SieveCertificate) -> bool:
    """Re-derive the certificate's conclusion from its stored data."""
    p, n = cert.p, cert.n
    if n < 3 or n % 2 == 0 or p < 2:
        return False
    if cert.kind == BASIC:
        s = cert.s
        if s is None or s < 3 or not cert.signs:
            return False
        img = _replay_image(n, s)
        return all(not any(img[r] for r in _targets(p, s, e)) for e in cert.signs)
    if cert.kind == ORDER:
        if len(cert.signs) != 1 or not cert.contributing or cert.t is None or cert.l is None:
            return False
        sign = cert.signs[0]
        for s, t_s in cert.contributing:
            if s < 3 or math.gcd(s, p) != 1 or t_s < 2:
                return False
            if multiplicative_order(p, s) != t_s:
                return False
            img = _replay_image(n, s)
            if any(img[sign * pow(p, k, s) % s] for k in range(1, t_s)):
                return False
        if cert.t != lcm(*(t_s for _, t_s in cert.contributing)):
            return False
        l = cert.l
        if l < 3 or math.gcd(l, p) != 1 or pow(p, cert.t, l) != 1:
            return False
        return not _replay_image(n, l)[sign % l]
    if cert.kind == TWO_VAR:
        s = cert.s
        if s is None or s < 3 or cert.target is None or cert.v_base is None:
            return False
        goal = cert.target % s
        poly = fn_poly(n)
        for v in _v_residues(p, cert.v_base, s):
            for u in range(s):
                if poly.eval_mod(u, v, s) == goal:
                    return False
        return True
    return False
