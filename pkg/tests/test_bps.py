import random
from fractions import Fraction

import pytest

from refinedfloor.bps import (
    NotPalindromic,
    NotPolynomialInQ,
    bps_cubic,
    bps_delpezzo_high,
    decompose_bps,
    relative_bps,
)
from refinedfloor.chrec import MemoCache, ch_count
from refinedfloor.classes import CurveClass, SpecInvalid
from refinedfloor.qalgebra import (
    HalfLaurent,
    NotDivisible,
    eval_q1,
    is_palindromic,
    quantum_integer as Q,
)


def cc(a, b=(), k=6):
    return CurveClass(k, a, tuple(list(b) + [0] * (k - len(b))))


@pytest.fixture(scope="module")
def cache():
    return MemoCache()


def test_decompose_quantum_square():
    dec = decompose_bps(Q(2) ** 2)
    assert dec.coefficients == {0: Fraction(4), 1: Fraction(-1)}
    assert dec.recompose() == Q(2) ** 2


def test_decompose_constant_and_zero():
    assert decompose_bps(HalfLaurent.constant(7)).coefficients == {0: Fraction(7)}
    assert decompose_bps(HalfLaurent.zero()).coefficients == {}


def test_decompose_base_genus_labels():
    dec = decompose_bps(Q(3) ** 2, base_genus=2)
    obj = dec.to_json_obj()
    assert set(obj["bps"]) == {"g2", "g3", "g4"}


def test_decompose_rejects_half_powers():
    with pytest.raises(NotPolynomialInQ):
        decompose_bps(Q(2))  # q^{1/2} + q^{-1/2}


def test_decompose_rejects_non_palindromic():
    p = HalfLaurent([(2, Fraction(1)), (0, Fraction(1))])  # q + 1
    with pytest.raises(NotPalindromic):
        decompose_bps(p)


def test_decompose_random_roundtrip():
    rng = random.Random(20260823)
    for _ in range(1000):
        deg = rng.randint(0, 6)
        terms = [(0, Fraction(rng.randint(-9, 9)))]
        for e in range(1, deg + 1):
            c = Fraction(rng.randint(-9, 9))
            if c:
                terms.append((2 * e, c))
                terms.append((-2 * e, c))
        p = HalfLaurent([t for t in terms if t[1]])
        dec = decompose_bps(p)
        assert dec.recompose() == p


def test_relative_bps_single_max_tangency(cache):
    # N^{∅,(4)}(2L) = [4]; dividing by [4]/4 leaves the integer 4
    v = relative_bps(cc(2), 0, (), (4,), cache=cache)
    assert v == HalfLaurent.constant(4)


def test_relative_bps_divides_given_polynomial(cache):
    n_q = ch_count(cc(2), 0, (), (1, 3), cache)
    v = relative_bps(cc(2), 0, (), (1, 3), n_q=n_q, cache=cache)
    assert v == HalfLaurent.constant(6)
    assert eval_q1(n_q) == 6  # [3]/3 at q=1 is 1


def test_relative_bps_mixed_types(cache):
    for mu1, mu2 in [((1,), (1, 2)), ((1, 1), (2,)), ((), (1, 1, 2))]:
        v = relative_bps(cc(2), 0, mu1, mu2, cache=cache)
        assert is_palindromic(v)
        assert v.has_only_integer_powers()


def test_relative_bps_not_divisible_raises():
    with pytest.raises(NotDivisible):
        relative_bps(cc(1), 0, (), (2,), n_q=HalfLaurent.constant(3))


def test_bps_delpezzo_high_low_degrees(cache):
    # k = 0: plane relative to a conic; lines and the conic itself
    d1 = bps_delpezzo_high(0, CurveClass(0, 1, ()), 0, cache)
    assert eval_q1(d1) == 1
    d2 = bps_delpezzo_high(0, CurveClass(0, 2, ()), 0, cache)
    assert d2.has_only_integer_powers()
    assert is_palindromic(d2)
    dec = decompose_bps(d2)
    assert all(c.denominator == 1 for c in dec.coefficients.values())


def test_bps_delpezzo_high_validation():
    with pytest.raises(SpecInvalid):
        bps_delpezzo_high(6, cc(1), 0)
    with pytest.raises(SpecInvalid):
        bps_delpezzo_high(5, CurveClass(5, 0, (-1, 0, 0, 0, 0)), 0)
    with pytest.raises(SpecInvalid):
        bps_delpezzo_high(2, CurveClass(2, 1, (1, 1)), -1)  # c1·d + g' - 1 < 0


def test_bps_cubic_line_class(cache):
    v = bps_cubic(cc(1), 0, cache)
    assert v.has_only_integer_powers()
    assert is_palindromic(v)
    dec = decompose_bps(v)
    assert all(c.denominator == 1 for c in dec.coefficients.values())


def test_bps_cubic_cubic_class(cache):
    v = bps_cubic(cc(3, (1,) * 6), 0, cache)
    assert v.has_only_integer_powers()
    assert is_palindromic(v)
    dec = decompose_bps(v)
    assert all(c.denominator == 1 for c in dec.coefficients.values())


def test_bps_cubic_validation():
    with pytest.raises(SpecInvalid):
        bps_cubic(CurveClass(4, 1, (0,) * 4), 0)
    with pytest.raises(SpecInvalid):
        bps_cubic(CurveClass(6, 0, (-1, 0, 0, 0, 0, 0)), 0)
