"""Relative and surface BPS polynomials derived from the refined counts.

The refined count divided by its quantum tangency factors is the relative
BPS polynomial; for del Pezzo surfaces of degree >= 3 the higher-genus BPS
polynomial of a class is a refined count with all contacts transverse
(plus, on the cubic, correction terms from multiples of the conic class).
Expanding in powers of z = -(q - 2 + q^{-1}) extracts the individual BPS
invariants genus by genus.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .chrec import MemoCache, ch_count
from .classes import CurveClass, SpecInvalid
from .partitions import Partition
from .qalgebra import HalfLaurent, NotDivisible, div_exact, is_palindromic, quantum_integer


class NotPolynomialInQ(ValueError):
    """Expansion in q - 2 + q^{-1} requested for a half-power polynomial."""


class NotPalindromic(ValueError):
    """Expansion requested for a non-palindromic polynomial."""


def _z() -> HalfLaurent:
    """The basis variable z = -(q - 2 + q^{-1})."""
    return HalfLaurent([(2, Fraction(-1)), (0, Fraction(2)), (-2, Fraction(-1))])


@dataclass
class BpsDecomposition:
    """A palindromic polynomial expanded as Σ_j coeff_j · z^j.

    coeff_j is the BPS invariant contributed by genus base_genus + j.
    """

    base_genus: int
    coefficients: dict[int, Fraction]
    source: HalfLaurent

    def recompose(self) -> HalfLaurent:
        out = HalfLaurent.zero()
        z = _z()
        for j, c in self.coefficients.items():
            out = out + (z ** j).scale(c)
        return out

    def to_json_obj(self) -> dict:
        return {
            "polynomial": self.source.to_json_obj(),
            "bps": {
                f"g{self.base_genus + j}": str(c)
                for j, c in sorted(self.coefficients.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def decompose_bps(p: HalfLaurent, base_genus: int = 0) -> BpsDecomposition:
    """Expand p in powers of z = -(q-2+q^{-1}), top degree first.

    z^j has leading term (-1)^j q^j, so elimination from the highest
    exponent downward is exact and unique.
    """
    if not p.has_only_integer_powers():
        raise NotPolynomialInQ("polynomial has half-integer powers of q")
    if not is_palindromic(p):
        raise NotPalindromic("polynomial is not palindromic")
    coeffs: dict[int, Fraction] = {}
    rest = p
    z = _z()
    while not rest.is_zero():
        e = rest.max_exponent()
        if e < 0:
            raise NotPalindromic("residual has only negative powers; input not palindromic")
        j = e // 2
        c = rest.coefficient(e) * (-1 if j % 2 else 1)
        coeffs[j] = c
        rest = rest - (z ** j).scale(c)
    return BpsDecomposition(base_genus, coeffs, p)


def relative_bps(
    d: CurveClass,
    genus: int,
    mu1: Partition,
    mu2: Partition,
    n_q: Optional[HalfLaurent] = None,
    cache: Optional[MemoCache] = None,
) -> HalfLaurent:
    """N_q divided exactly by its quantum tangency factors.

    A divisibility failure is reported, not smoothed over: it would
    falsify either the computation or the divisibility statement.
    """
    if n_q is None:
        n_q = ch_count(d, genus, mu1, mu2, cache)
    denom = HalfLaurent.one()
    for w in tuple(mu1) + tuple(mu2):
        denom = denom * quantum_integer(w).scale(Fraction(1, w))
    return div_exact(n_q, denom)


def bps_delpezzo_high(
    k: int, d: CurveClass, genus: int, cache: Optional[MemoCache] = None
) -> HalfLaurent:
    """Higher-genus BPS polynomial of a del Pezzo surface of degree >= 4 (k <= 5).

    Equals the refined count of type (∅, (1^{d·E})).
    """
    if not 0 <= k <= 5 or d.k != k:
        raise SpecInvalid("bps_delpezzo_high needs k <= 5 matching the class")
    if d.dot_L() <= 0 or d.dot_E() < 0:
        raise SpecInvalid("class must have d·L > 0 and d·E >= 0")
    if d.c1_dot() + genus - 1 < 0:
        raise SpecInvalid("requires c1·d + g' - 1 >= 0")
    return ch_count(d, genus, (), (1,) * d.dot_E(), cache)


def bps_cubic(d: CurveClass, genus: int, cache: Optional[MemoCache] = None) -> HalfLaurent:
    """Higher-genus BPS polynomial of the cubic surface (k = 6).

    Σ_j C(d·E + 2j, j) · N_q^{∅,(1^{d·E+2j})}(d − j·[E], g'), the sum over
    j with (d − j[E])·L > 0.
    """
    if d.k != 6:
        raise SpecInvalid("bps_cubic needs k = 6")
    if d.dot_L() <= 0 or d.dot_E() < 0:
        raise SpecInvalid("class must have d·L > 0 and d·E >= 0")
    total = HalfLaurent.zero()
    j = 0
    while d.sub_conic(j).dot_L() > 0:
        dj = d.sub_conic(j)
        term = ch_count(dj, genus, (), (1,) * (d.dot_E() + 2 * j), cache)
        total = total + term.scale(math.comb(d.dot_E() + 2 * j, j))
        j += 1
    return total
