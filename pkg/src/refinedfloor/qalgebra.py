"""Exact arithmetic in the ring Q[q^{1/2}, q^{-1/2}].

Laurent polynomials in the formal variable q^{1/2} with rational
coefficients are the universal value type of this package: quantum
integers, refined diagram counts and BPS polynomials all live here.

Exponents are stored as integers counting *half powers*: the stored
exponent ``e`` means ``q^{e/2}``.  With this convention "only integer
powers of q" is a parity check, and no fraction type is needed in the
exponent.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Mapping


class DivisionByZero(ZeroDivisionError):
    """Division of a Laurent polynomial by zero."""


class NotDivisible(ArithmeticError):
    """Exact Laurent division left a non-zero remainder."""


class HalfPowerAtMinusOne(ValueError):
    """q = -1 requested on a polynomial with an odd power of q^{1/2}."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"coefficient must be int or Fraction, got {type(x).__name__}")


class HalfLaurent:
    """Immutable Laurent polynomial in q^{1/2} over Q.

    Terms are kept as a sorted association list ``(e, c)`` with strictly
    increasing exponents and no zero coefficients; the empty list is 0.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            if not isinstance(e, int):
                raise TypeError("exponents must be integers (half powers of q)")
            c = _as_fraction(c)
            acc[e] = acc.get(e, Fraction(0)) + c
        self._terms: tuple[tuple[int, Fraction], ...] = tuple(
            (e, c) for e, c in sorted(acc.items()) if c != 0
        )

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "HalfLaurent":
        return cls()

    @classmethod
    def one(cls) -> "HalfLaurent":
        return cls([(0, Fraction(1))])

    @classmethod
    def constant(cls, c) -> "HalfLaurent":
        return cls([(0, _as_fraction(c))])

    @classmethod
    def monomial(cls, e: int, c=1) -> "HalfLaurent":
        """The monomial c * q^{e/2}."""
        return cls([(e, _as_fraction(c))])

    # -- inspection ------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, e: int) -> Fraction:
        """Coefficient of q^{e/2}."""
        for ee, c in self._terms:
            if ee == e:
                return c
        return Fraction(0)

    def min_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return self._terms[0][0]

    def max_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return self._terms[-1][0]

    def has_only_integer_powers(self) -> bool:
        """True iff every stored exponent is even, i.e. p lies in Q[q, q^{-1}]."""
        return all(e % 2 == 0 for e, _ in self._terms)

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for _, c in self._terms)

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "HalfLaurent") -> "HalfLaurent":
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return HalfLaurent(list(self._terms) + list(other._terms))

    def __sub__(self, other: "HalfLaurent") -> "HalfLaurent":
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return HalfLaurent(list(self._terms) + [(e, -c) for e, c in other._terms])

    def __neg__(self) -> "HalfLaurent":
        return HalfLaurent([(e, -c) for e, c in self._terms])

    def __mul__(self, other) -> "HalfLaurent":
        if isinstance(other, (int, Fraction)):
            other = HalfLaurent.constant(other)
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = e1 + e2
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return HalfLaurent(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "HalfLaurent":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = HalfLaurent.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "HalfLaurent":
        c = _as_fraction(c)
        return HalfLaurent([(e, cc * c) for e, cc in self._terms])

    def __eq__(self, other) -> bool:
        return isinstance(other, HalfLaurent) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- text / JSON form ------------------------------------------------

    def __repr__(self) -> str:
        return f"HalfLaurent({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self) -> str:
        """Render as e.g. ``q^{-1} + 2 + q`` or ``1/2*q^{1/2}``."""
        if not self._terms:
            return "0"
        pieces = []
        for i, (e, c) in enumerate(self._terms):
            mono = _monomial_text(e)
            mag = abs(c)
            if mono is None:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(pieces)

    @classmethod
    def from_text(cls, text: str) -> "HalfLaurent":
        return _parse_text(text)

    def to_json_obj(self) -> dict:
        return {"halves": [[e, f"{c.numerator}/{c.denominator}"] for e, c in self._terms]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "HalfLaurent":
        terms = []
        for e, c in obj["halves"]:
            num, _, den = str(c).partition("/")
            terms.append((int(e), Fraction(int(num), int(den or 1))))
        return cls(terms)

    @classmethod
    def from_json(cls, text: str) -> "HalfLaurent":
        return cls.from_json_obj(json.loads(text))


def _monomial_text(e: int) -> str | None:
    """Text for q^{e/2}; None for e = 0 (pure constant)."""
    if e == 0:
        return None
    if e == 2:
        return "q"
    if e % 2 == 0:
        return "q^{%d}" % (e // 2)
    return "q^{%d/2}" % e


_TERM_RE = re.compile(
    r"""^\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*)?)?   # optional coefficient
        (?:(?P<q>q)(?:\^\{(?P<exp>-?\d+(?:/2)?)\})?)?  # optional q power
        \s*$""",
    re.VERBOSE,
)


def _parse_text(text: str) -> HalfLaurent:
    s = text.strip()
    if s in ("", "0"):
        return HalfLaurent.zero()
    # Normalize to a signed term list.
    s = s.replace(" - ", " + -").replace(" + ", "|")
    if s.startswith("-"):
        s = "-" + s[1:].lstrip()
    terms = []
    for raw in s.split("|"):
        raw = raw.strip()
        sign = 1
        if raw.startswith("-"):
            sign = -1
            raw = raw[1:].strip()
        m = _TERM_RE.match(raw)
        if not m or (m.group("coef") is None and m.group("q") is None):
            raise ValueError(f"cannot parse term {raw!r} in {text!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("q") is None:
            e = 0
        elif m.group("exp") is None:
            e = 2
        else:
            exp = m.group("exp")
            e = int(exp[:-2]) if exp.endswith("/2") else 2 * int(exp)
        terms.append((e, sign * coef))
    return HalfLaurent(terms)


# -- the operations the counting layers use -------------------------------


def quantum_integer(n: int) -> HalfLaurent:
    """The quantum integer [n]_q = q^{-(n-1)/2} + q^{-(n-3)/2} + ... + q^{(n-1)/2}.

    [0]_q is the empty sum 0; [1]_q = 1.  Always palindromic, and
    eval_q1([n]_q) = n.
    """
    if n < 0:
        raise ValueError("quantum integer needs n >= 0")
    return HalfLaurent([(2 * j - (n - 1), Fraction(1)) for j in range(n)])


def q_derivative_coefficient(n: int) -> HalfLaurent:
    """Coefficient of x^{n-1} in the q-derivative of x^n.

    Equals (q^{n/2} - q^{-n/2}) / (q^{1/2} - q^{-1/2}), i.e. the quantum
    integer [n]_q; kept as a named operation because it is the identity
    that motivates the q-refinement.
    """
    if n < 1:
        raise ValueError("q-derivative coefficient needs n >= 1")
    num = HalfLaurent.monomial(n) - HalfLaurent.monomial(-n)
    den = HalfLaurent.monomial(1) - HalfLaurent.monomial(-1)
    return div_exact(num, den)


def div_exact(num: HalfLaurent, den: HalfLaurent) -> HalfLaurent:
    """Exact quotient in Q[q^{±1/2}]; raises NotDivisible on a remainder.

    A failure signals either a caller bug or a falsified divisibility
    statement, so it is an error rather than a value.
    """
    if den.is_zero():
        raise DivisionByZero("division of HalfLaurent by zero")
    if num.is_zero():
        return HalfLaurent.zero()
    # Shift both operands down to ordinary polynomials and long-divide;
    # in the Laurent ring divisibility is unaffected by monomial shifts.
    shift = num.min_exponent() - den.min_exponent()
    n0, d0 = num.min_exponent(), den.min_exponent()
    r = {e - n0: c for e, c in num.terms}
    d_terms = [(e - d0, c) for e, c in den.terms]
    d_top, d_lead = d_terms[-1]
    quo: dict[int, Fraction] = {}
    while r and max(r) >= d_top:
        top = max(r)
        e = top - d_top
        c = r[top] / d_lead
        quo[e] = c
        for ee, cc in d_terms:
            k = ee + e
            v = r.get(k, Fraction(0)) - cc * c
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    if r:
        raise NotDivisible(f"({num}) is not divisible by ({den})")
    return HalfLaurent([(e + shift, c) for e, c in quo.items()])


def eval_q1(p: HalfLaurent) -> Fraction:
    """Evaluate at q = 1 (sum of coefficients)."""
    return sum((c for _, c in p.terms), Fraction(0))


def eval_qm1(p: HalfLaurent) -> Fraction:
    """Evaluate at q = -1; requires only integer powers of q.

    An odd power of q^{1/2} makes q = -1 ambiguous, which is reported
    rather than resolved by a branch choice.
    """
    if not p.has_only_integer_powers():
        raise HalfPowerAtMinusOne(
            "polynomial has half-integer powers of q; q = -1 is ambiguous"
        )
    return sum(((-c if (e // 2) % 2 else c) for e, c in p.terms), Fraction(0))


def is_palindromic(p: HalfLaurent) -> bool:
    """True iff the coefficient of q^{e/2} equals that of q^{-e/2} for all e."""
    return all(p.coefficient(-e) == c for e, c in p.terms)
