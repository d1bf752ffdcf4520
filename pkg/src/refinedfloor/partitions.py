"""Partitions (multisets of positive integers) and their combinatorics.

A partition is represented as a tuple of positive ints; the canonical
unordered form sorts entries descending.  Tangency profiles, edge-weight
vectors and the recursion's distribution data are all partitions.
"""

from __future__ import annotations

import math
from collections import Counter
from itertools import product
from typing import Iterable, Iterator

Partition = tuple[int, ...]


class NotSubmultiset(ValueError):
    """Multiset difference or binomial asked for a non-contained part."""


class InvalidArguments(ValueError):
    """Combinatorial coefficient called outside its domain."""


def make(entries: Iterable[int]) -> Partition:
    """Canonical (descending) partition from any iterable of entries."""
    p = tuple(sorted(entries, reverse=True))
    if any(e < 1 for e in p):
        raise InvalidArguments(f"partition entries must be >= 1, got {p}")
    return p


def size(mu: Partition) -> int:
    return sum(mu)


def length(mu: Partition) -> int:
    return len(mu)


def count_of(mu: Partition, i: int) -> int:
    """Multiplicity of the value i in mu."""
    return sum(1 for e in mu if e == i)


def union(mu: Partition, lam: Partition) -> Partition:
    return make(mu + lam)


def is_sub(lam: Partition, mu: Partition) -> bool:
    return not Counter(lam) - Counter(mu)


def diff(mu: Partition, lam: Partition) -> Partition:
    if not is_sub(lam, mu):
        raise NotSubmultiset(f"{lam} is not a submultiset of {mu}")
    return make((Counter(mu) - Counter(lam)).elements())


def multinomial(n: int, parts: list[int]) -> int:
    """n! / (a_1! ... a_k! (n - Σa_i)!), the implicit-remainder multinomial."""
    if n < 0 or any(a < 0 for a in parts) or sum(parts) > n:
        raise InvalidArguments(f"multinomial({n}, {parts}) out of domain")
    out = 1
    rem = n
    for a in parts:
        out *= math.comb(rem, a)
        rem -= a
    return out


def partition_binomial(mu: Partition, parts: list[Partition]) -> int:
    """Product over values i of multinomial(i(mu), [i(part_j)]_j).

    Counts the ways of selecting the (disjoint) sub-multisets parts from mu
    when equal entries of mu are distinguishable.
    """
    combined = Counter()
    for p in parts:
        combined += Counter(p)
    if combined - Counter(mu):
        raise NotSubmultiset(f"{parts} do not fit inside {mu}")
    out = 1
    for i, c in Counter(mu).items():
        out *= multinomial(c, [count_of(p, i) for p in parts])
    return out


def splittings(mu: Partition, m: int) -> Iterator[tuple[Partition, ...]]:
    """All m-tuples of partitions with disjoint union contained in mu.

    Equal entries of mu are indistinguishable: each tuple is emitted once.
    Enumerates per value of mu by weak compositions of its multiplicity
    into m parts plus an implicit "unused" bucket.
    """
    if m < 1:
        raise InvalidArguments("splittings needs m >= 1")
    values = sorted(Counter(mu).items())

    def compositions(total: int, slots: int) -> Iterator[tuple[int, ...]]:
        if slots == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, slots - 1):
                yield (first,) + rest

    per_value = [
        [comp for comp in compositions(c, m + 1)]  # last slot = unused copies
        for _, c in values
    ]
    for choice in product(*per_value):
        parts = []
        for j in range(m):
            entries = []
            for (i, _), comp in zip(values, choice):
                entries.extend([i] * comp[j])
            parts.append(make(entries))
        yield tuple(parts)


def partitions_of(n: int) -> Iterator[Partition]:
    """All unordered partitions of n, each once, entries descending."""
    if n < 0:
        raise InvalidArguments("partitions_of needs n >= 0")

    def gen(rem: int, cap: int) -> Iterator[Partition]:
        if rem == 0:
            yield ()
            return
        for first in range(min(rem, cap), 0, -1):
            for rest in gen(rem - first, first):
                yield (first,) + rest

    yield from gen(n, n)


def parse(text: str) -> Partition:
    """Comma-separated entries; "∅" or empty means the empty partition."""
    s = text.strip()
    if s in ("", "∅", "()"):
        return ()
    return make(int(x) for x in s.split(","))


def to_text(mu: Partition) -> str:
    return "∅" if not mu else ",".join(str(e) for e in mu)
