"""Curve classes on the blow-up of the plane at k <= 6 points on a conic.

A class d = a·L − Σ b_i·E_i is stored as (k, a, b).  The intersection
form is the standard blow-up form L² = 1, L·E_i = 0, E_i·E_j = −δ_ij,
and the conic class is [E] = 2L − ΣE_i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional


class IndexOutOfRange(IndexError):
    """Exceptional-divisor index outside 1..k."""


class SpecInvalid(ValueError):
    """Input rejected by a domain validity rule."""


@dataclass(frozen=True)
class CurveClass:
    """The class a·L − Σ b_i·E_i on the blow-up at k points of a conic."""

    k: int
    a: int
    b: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.k <= 6:
            raise SpecInvalid(f"k must be in [0, 6], got {self.k}")
        if len(self.b) != self.k:
            raise SpecInvalid(f"need {self.k} exceptional coefficients, got {len(self.b)}")
        object.__setattr__(self, "b", tuple(self.b))

    # -- intersection pairings --------------------------------------------

    def dot_L(self) -> int:
        return self.a

    def dot_Ei(self, i: int) -> int:
        """Pairing with E_i, i in 1..k.  Equals b_i since E_i² = −1."""
        if not 1 <= i <= self.k:
            raise IndexOutOfRange(f"i={i} outside 1..{self.k}")
        return self.b[i - 1]

    def dot_E(self) -> int:
        """Pairing with the conic class [E] = 2L − ΣE_i."""
        return 2 * self.a - sum(self.b)

    def c1_dot(self) -> int:
        """Pairing with the anticanonical class 3L − ΣE_i."""
        return 3 * self.a - sum(self.b)

    # -- arithmetic --------------------------------------------------------

    def sub_conic(self, j: int) -> "CurveClass":
        """d − j·[E]: subtract j copies of the conic class."""
        if j < 0:
            raise SpecInvalid("sub_conic needs j >= 0")
        return CurveClass(self.k, self.a - 2 * j, tuple(bi - j for bi in self.b))

    def is_exceptional(self) -> Optional[tuple[int, int]]:
        """(index, multiplicity) when d = l·[E_a] with l >= 1, else None."""
        if self.a != 0:
            return None
        neg = [(i, -bi) for i, bi in enumerate(self.b, start=1) if bi != 0]
        if len(neg) == 1 and neg[0][1] >= 1:
            return neg[0]
        return None

    def canonical_key(self) -> "CurveClass":
        """b sorted descending; a cache key exploiting point-label symmetry."""
        return CurveClass(self.k, self.a, tuple(sorted(self.b, reverse=True)))

    def __add__(self, other: "CurveClass") -> "CurveClass":
        if self.k != other.k:
            raise SpecInvalid("cannot add classes with different k")
        return CurveClass(self.k, self.a + other.a,
                          tuple(x + y for x, y in zip(self.b, other.b)))

    def __sub__(self, other: "CurveClass") -> "CurveClass":
        if self.k != other.k:
            raise SpecInvalid("cannot subtract classes with different k")
        return CurveClass(self.k, self.a - other.a,
                          tuple(x - y for x, y in zip(self.b, other.b)))

    # -- text / JSON --------------------------------------------------------

    def to_text(self) -> str:
        return f"{self.a};{','.join(str(x) for x in self.b)}" if self.k else f"{self.a};"

    @classmethod
    def from_text(cls, text: str, k: Optional[int] = None) -> "CurveClass":
        s = text.strip()
        if ";" not in s:
            raise SpecInvalid(f"class text must look like 'a;b1,...,bk': {text!r}")
        a_part, _, b_part = s.partition(";")
        b = tuple(int(x) for x in b_part.split(",")) if b_part.strip() else ()
        if k is not None and len(b) != k:
            raise SpecInvalid(f"expected {k} exceptional coefficients, got {len(b)}")
        return cls(len(b), int(a_part), b)

    def to_json_obj(self) -> dict:
        return {"k": self.k, "a": self.a, "b": list(self.b)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CurveClass":
        return cls(int(obj["k"]), int(obj["a"]), tuple(int(x) for x in obj["b"]))

    @classmethod
    def from_json(cls, text: str) -> "CurveClass":
        return cls.from_json_obj(json.loads(text))


def line(k: int) -> CurveClass:
    """[L]: the strict transform of a general line."""
    return CurveClass(k, 1, (0,) * k)


def conic(k: int) -> CurveClass:
    """[E] = 2L − ΣE_i: the strict transform of the fixed conic."""
    return CurveClass(k, 2, (1,) * k)


def exceptional(k: int, a: int) -> CurveClass:
    """[E_a]: the a-th exceptional divisor, stored with b_a = −1."""
    if not 1 <= a <= k:
        raise IndexOutOfRange(f"a={a} outside 1..{k}")
    return CurveClass(k, 0, tuple(-1 if i == a else 0 for i in range(1, k + 1)))
