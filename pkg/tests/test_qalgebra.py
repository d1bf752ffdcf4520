from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from refinedfloor.qalgebra import (
    DivisionByZero,
    HalfLaurent,
    HalfPowerAtMinusOne,
    NotDivisible,
    div_exact,
    eval_q1,
    eval_qm1,
    is_palindromic,
    q_derivative_coefficient,
    quantum_integer,
)


def test_quantum_integer_small():
    assert quantum_integer(0) == HalfLaurent.zero()
    assert quantum_integer(1) == HalfLaurent.one()
    assert quantum_integer(2).to_text() == "q^{-1/2} + q^{1/2}"
    assert quantum_integer(3).to_text() == "q^{-1} + 1 + q"


def test_square_of_two():
    q2 = quantum_integer(2)
    assert (q2 * q2).to_text() == "q^{-1} + 2 + q"


def test_div_exact_roundtrip():
    q2, q3 = quantum_integer(2), quantum_integer(3)
    assert div_exact(q2 * q2, q2) == q2
    assert div_exact(q2 * q3, q3) == q2
    with pytest.raises(NotDivisible):
        div_exact(q3, q2)
    with pytest.raises(DivisionByZero):
        div_exact(q2, HalfLaurent.zero())


def test_q_derivative_coefficient_is_quantum_integer():
    for n in range(1, 9):
        assert q_derivative_coefficient(n) == quantum_integer(n)


def test_eval_q1_quartic_total():
    q = quantum_integer
    total = q(2) ** 4 + q(4) ** 2 + (q(3) ** 2).scale(10) + (q(2) ** 2).scale(67) \
        + HalfLaurent.constant(226)
    assert eval_q1(total) == 616


def test_eval_qm1_parity():
    # [n]_q at q = -1 vanishes for even n, is ±1 for odd n
    for n in range(0, 8, 2):
        sq = quantum_integer(n) * quantum_integer(n)
        assert eval_qm1(sq) == 0
    for n in range(1, 8, 2):
        sq = quantum_integer(n) * quantum_integer(n)
        assert eval_qm1(sq) == 1
    with pytest.raises(HalfPowerAtMinusOne):
        eval_qm1(quantum_integer(2))


def test_palindromic():
    assert is_palindromic(quantum_integer(5))
    assert is_palindromic(quantum_integer(4) * quantum_integer(2))
    assert not is_palindromic(HalfLaurent.monomial(2) + HalfLaurent.one())


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=12))
def test_quantum_product_identity(m, n):
    # [m][n+1] - [m+1][n] = [m-n] for m > n; a classical q-number identity
    if m <= n:
        m, n = n + 1, m
    lhs = quantum_integer(m) * quantum_integer(n + 1) - quantum_integer(m + 1) * quantum_integer(n)
    assert lhs == quantum_integer(m - n)


@given(
    st.lists(
        st.tuples(
            st.integers(min_value=-8, max_value=8),
            st.fractions(min_value=-5, max_value=5, max_denominator=6),
        ),
        max_size=6,
    )
)
def test_text_and_json_roundtrip(terms):
    p = HalfLaurent(terms)
    assert HalfLaurent.from_text(p.to_text()) == p
    assert HalfLaurent.from_json(p.to_json()) == p


def test_text_rendering_conventions():
    assert HalfLaurent.monomial(1, Fraction(1, 2)).to_text() == "1/2*q^{1/2}"
    assert HalfLaurent.monomial(2).to_text() == "q"
    assert HalfLaurent.monomial(-2).to_text() == "q^{-1}"
    assert HalfLaurent.zero().to_text() == "0"
    assert (HalfLaurent.monomial(-2) + HalfLaurent.constant(2) + HalfLaurent.monomial(2)
            ).to_text() == "q^{-1} + 2 + q"


@given(
    st.lists(st.tuples(st.integers(-6, 6), st.fractions(min_value=-4, max_value=4, max_denominator=4)), max_size=5),
    st.lists(st.tuples(st.integers(-6, 6), st.fractions(min_value=-4, max_value=4, max_denominator=4)), min_size=1, max_size=5),
)
def test_div_exact_inverts_multiplication(at, bt):
    a, b = HalfLaurent(at), HalfLaurent(bt)
    if b.is_zero():
        return
    assert div_exact(a * b, b) == a
