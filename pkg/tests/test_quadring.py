from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from threesq.quadring import (
    ONE,
    QuadInt,
    QuadIntMod,
    exact_div_scalar,
    qmul,
    qnorm,
    qpow,
    qpow_mod,
)

big = st.integers(min_value=-(2**256), max_value=2**256)
quad = st.builds(QuadInt, big, big)
small_quad = st.builds(QuadInt, st.integers(-1000, 1000), st.integers(-1000, 1000))


def test_qmul_examples():
    x = QuadInt(3, 1)
    assert qmul(x, x) == QuadInt(3, 6)
    assert qmul(x, ONE) == x


def test_qpow_examples():
    assert qpow(QuadInt(9, 1), 3) == QuadInt(567, 237)
    assert qpow(QuadInt(5, 7), 0) == ONE
    assert qpow(QuadInt(9, 2), 1) == QuadInt(9, 2)
    with pytest.raises(ValueError):
        qpow(QuadInt(1, 1), -1)


def test_qnorm_examples():
    assert qnorm(QuadInt(9, 1)) == 87
    assert qnorm(QuadInt(3, 1)) == 15
    assert qnorm(QuadInt(0, 0)) == 0


def test_exact_div_scalar():
    assert exact_div_scalar(QuadInt(567, 237), 3) == QuadInt(189, 79)
    assert exact_div_scalar(QuadInt(567, 237), 9) is None
    assert exact_div_scalar(QuadInt(5, -4), 1) == QuadInt(5, -4)
    with pytest.raises(ZeroDivisionError):
        exact_div_scalar(QuadInt(1, 1), 0)


def test_qpow_mod_examples():
    assert qpow_mod(QuadIntMod(9, 1, 5), 3) == QuadIntMod(2, 2, 5)
    assert qpow_mod(QuadIntMod(4, 3, 7), 0) == QuadIntMod(1, 0, 7)
    with pytest.raises(ValueError):
        QuadIntMod(1, 1, 1)


@given(quad, quad, quad)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(quad, quad)
def test_conjugation_and_norm(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert qnorm(x * y) == qnorm(x) * qnorm(y)
    prod = x * x.conj()
    assert prod.c == 0 and prod.a == qnorm(x)
    assert qnorm(x) >= 0 and (qnorm(x) == 0) == (x == QuadInt(0, 0))


@given(small_quad, st.integers(0, 50), st.integers(2, 97))
def test_modular_commutes_with_exact(x, e, m):
    assert qpow(x, e).reduce(m) == qpow_mod(x.reduce(m), e)


@given(small_quad, st.integers(0, 30))
def test_qpow_matches_repeated_multiplication(x, e):
    r = ONE
    for _ in range(e):
        r = qmul(r, x)
    assert qpow(x, e) == r
