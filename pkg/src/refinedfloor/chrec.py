"""Caporaso–Harris style recursion for the refined counts.

The count N_q^{μ1,μ2}(d, g') satisfies, whenever n := d·L − 1 + g' + l(μ2) > 0
and d·L > 0,

    N = Σ_{w ∈ μ2, distinct} w · N^{μ1∪(w), μ2∖(w)}(d, g')
      + Σ_{splittings} (1/σ) · multinomial(d·L+g'−2+l(μ2), [n_j])
        · binom(μ1, [μ1_j]) · Π_j binom(μ2_j, [μ2_j∖ξ_j])
        · Π_j N^{μ1_j,μ2_j}(d_j, g'_j) · Π_{x∈ξ}[x]_q · Π_{y∈η}[y]_q / y,

where a splitting breaks d − [E] into parts d_j that are either honest
classes (d_j·L > 0) carrying tangency data (μ1_j, μ2_j) with new contacts
ξ_j ≠ ∅ ⊆ μ2_j, or single exceptional classes [E_a] with (∅, (1)); here
n_j = d_j·L + g'_j − 1 + l(μ2_j), η = μ1 ∖ ∪μ1_j, ξ = ∪ξ_j, and σ is the
product of factorials of the multiplicities of repeated part tuples.

Both sums strictly decrease the lexicographic measure (d·L, l(μ2)), so the
recursion terminates on the base layer of degree-one and exceptional keys.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional

from .classes import CurveClass, SpecInvalid, conic
from .partitions import (
    Partition,
    diff,
    length,
    make,
    multinomial,
    partition_binomial,
    partitions_of,
    size,
    splittings,
    union,
)
from .qalgebra import HalfLaurent, quantum_integer


class NonTermination(RuntimeError):
    """A recursive call failed to decrease the termination measure."""


class CacheCorrupt(UserWarning):
    """A persistent cache record failed its checksum and was ignored."""


@dataclass(frozen=True)
class CHKey:
    """A counting problem as the recursion sees it: unordered tangency data."""

    d: CurveClass
    genus: int
    mu1: Partition
    mu2: Partition

    def validate(self) -> None:
        if self.genus < 0:
            raise SpecInvalid("genus must be >= 0")
        if size(self.mu1) + size(self.mu2) != self.d.dot_E():
            raise SpecInvalid(
                f"|mu1| + |mu2| = {size(self.mu1) + size(self.mu2)} != d·E = {self.d.dot_E()}"
            )

    def canonical(self) -> "CHKey":
        return CHKey(self.d.canonical_key(), self.genus, make(self.mu1), make(self.mu2))

    def to_string(self) -> str:
        c = self.canonical()
        b = ",".join(str(x) for x in c.d.b)
        m1 = ",".join(str(x) for x in c.mu1)
        m2 = ",".join(str(x) for x in c.mu2)
        return f"k={c.d.k};d={c.d.a};{b};g={c.genus};mu1={m1};mu2={m2}"


@dataclass(frozen=True)
class SplitPart:
    d: CurveClass
    genus: int
    mu1: Partition
    mu2: Partition
    xi: Partition

    def sort_key(self):
        return (self.d.a, self.d.b, self.genus, self.mu1, self.mu2, self.xi)

    def n_slots(self) -> int:
        return self.d.dot_L() + self.genus - 1 + length(self.mu2)


@dataclass(frozen=True)
class Splitting:
    parts: tuple[SplitPart, ...]
    eta: Partition  # μ1 entries absorbed by the wall component

    @property
    def xi(self) -> Partition:
        out: tuple[int, ...] = ()
        for p in self.parts:
            out = union(out, p.xi)
        return out

    @property
    def sigma(self) -> int:
        counts: dict = {}
        for p in self.parts:
            counts[p.sort_key()] = counts.get(p.sort_key(), 0) + 1
        out = 1
        for c in counts.values():
            out *= math.factorial(c)
        return out


def _weak_compositions(total: int, slots: int) -> Iterator[tuple[int, ...]]:
    if slots == 0:
        if total == 0:
            yield ()
        return
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, slots - 1):
            yield (first,) + rest


def _exact_distributions(mu: Partition, slots: int) -> Iterator[tuple[Partition, ...]]:
    """All ways to split mu into exactly `slots` partitions with union mu."""
    if slots == 0:
        if not mu:
            yield ()
        return
    values = sorted(set(mu))
    per_value = [list(_weak_compositions(mu.count(v), slots)) for v in values]
    for choice in product(*per_value):
        parts = []
        for j in range(slots):
            entries = []
            for v, comp in zip(values, choice):
                entries.extend([v] * comp[j])
            parts.append(make(entries))
        yield tuple(parts)


def _class_decompositions(rem: CurveClass) -> Iterator[tuple[CurveClass, ...]]:
    """Unordered decompositions of rem into parts with a_j >= 1, b_ji >= 0, d_j·E >= 0."""
    if rem.a < 0 or any(x < 0 for x in rem.b):
        return
    if rem.a == 0:
        if all(x == 0 for x in rem.b):
            yield ()
        return
    for a_parts in partitions_of(rem.a):
        m = len(a_parts)
        coord_choices = [list(_weak_compositions(bi, m)) for bi in rem.b]
        seen = set()
        for choice in product(*coord_choices):
            parts = tuple(
                CurveClass(rem.k, a_parts[j], tuple(choice[i][j] for i in range(rem.k)))
                for j in range(m)
            )
            if any(p.dot_E() < 0 for p in parts):
                continue
            key = tuple(sorted((p.a, p.b) for p in parts))
            if key in seen:
                continue
            seen.add(key)
            yield parts


def enumerate_splittings(key: CHKey) -> Iterator[Splitting]:
    """Every valid splitting of the key exactly once (parts unordered)."""
    d, gp, mu1, mu2 = key.d, key.genus, make(key.mu1), make(key.mu2)
    k = d.k
    rem = d - conic(k)
    if rem.a < 0 or any(x < -1 for x in rem.b):
        return
    forced = frozenset(i for i in range(1, k + 1) if rem.b[i - 1] == -1)
    optional = [i for i in range(1, k + 1) if rem.b[i - 1] >= 0]
    seen: set = set()
    for mask in range(1 << len(optional)):
        S = set(forced) | {optional[i] for i in range(len(optional)) if mask >> i & 1}
        rem2 = rem
        for a in S:
            rem2 = CurveClass(k, rem2.a, tuple(
                x + (1 if i == a else 0) for i, x in enumerate(rem2.b, start=1)
            ))
        exc_parts = tuple(
            SplitPart(CurveClass(k, 0, tuple(-1 if i == a else 0 for i in range(1, k + 1))),
                      0, (), (1,), (1,))
            for a in sorted(S)
        )
        for classes in _class_decompositions(rem2):
            m = len(classes)
            for mu1_parts in splittings(mu1, m) if m else [()]:
                if any(size(mu1_parts[j]) > classes[j].dot_E() for j in range(m)):
                    continue
                for rho_parts in _exact_distributions(mu2, m) if m else ([()] if not mu2 else []):
                    budgets = []
                    ok = True
                    for j in range(m):
                        t = classes[j].dot_E() - size(mu1_parts[j]) - size(rho_parts[j])
                        if t < 1:
                            ok = False
                            break
                        budgets.append(t)
                    if not ok:
                        continue
                    for xis in product(*(partitions_of(t) for t in budgets)):
                        G = gp - sum(length(x) - 1 for x in xis)
                        if G < 0:
                            continue
                        for genera in _weak_compositions(G, m):
                            parts = exc_parts + tuple(
                                SplitPart(
                                    classes[j],
                                    genera[j],
                                    mu1_parts[j],
                                    union(rho_parts[j], xis[j]),
                                    xis[j],
                                )
                                for j in range(m)
                            )
                            parts = tuple(sorted(parts, key=SplitPart.sort_key))
                            sig = tuple(p.sort_key() for p in parts)
                            if sig in seen:
                                continue
                            seen.add(sig)
                            used = ()
                            for p in parts:
                                used = union(used, p.mu1)
                            yield Splitting(parts, diff(mu1, used))


# -- base layer ----------------------------------------------------------------


def _base_value(key: CHKey) -> HalfLaurent:
    """Initial data of the recursion (n = 0 or d·L <= 0 keys)."""
    d = key.d.canonical_key()
    mu1, mu2 = make(key.mu1), make(key.mu2)
    gp = key.genus
    zero = HalfLaurent.zero()
    if gp != 0:
        return zero
    bpos = tuple(x for x in d.b if x != 0)
    if d.a == 1 and not bpos:
        if mu1 == (2,) and mu2 == ():
            return quantum_integer(2).scale(Fraction(1, 2))
        if mu1 == (1, 1) and mu2 == ():
            return HalfLaurent.one()
        return zero
    if d.a == 1 and bpos == (1,) and mu1 == (1,) and mu2 == ():
        return HalfLaurent.one()
    if d.a == 1 and bpos == (1, 1) and mu1 == () and mu2 == ():
        # the line through two of the blown-up points; its only marking is empty
        return HalfLaurent.one()
    exc = key.d.is_exceptional()
    if exc is not None and exc[1] == 1 and mu1 == () and mu2 == (1,):
        return HalfLaurent.one()
    return zero


# -- memoized evaluation ---------------------------------------------------------


class MemoCache:
    """In-memory memo table with optional JSONL persistence."""

    def __init__(self, path: Optional[str] = None, read_only: bool = False):
        self.path = path
        self.read_only = read_only
        self.table: dict[str, HalfLaurent] = {}
        self._dirty: dict[str, HalfLaurent] = {}
        if path and os.path.exists(path):
            self.load()

    @staticmethod
    def _checksum(key: str, value_obj: dict) -> str:
        blob = key + "|" + json.dumps(value_obj, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def load(self) -> None:
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    if self._checksum(rec["key"], rec["value"]) != rec["checksum"]:
                        raise ValueError("checksum mismatch")
                    self.table[rec["key"]] = HalfLaurent.from_json_obj(rec["value"])
                except (ValueError, KeyError) as exc:
                    warnings.warn(
                        f"ignoring corrupt cache record in {self.path}: {exc}", CacheCorrupt
                    )

    def get(self, key: str) -> Optional[HalfLaurent]:
        return self.table.get(key)

    def put(self, key: str, value: HalfLaurent) -> None:
        if key not in self.table:
            self.table[key] = value
            if not self.read_only:
                self._dirty[key] = value

    def flush(self) -> None:
        if not self.path or self.read_only or not self._dirty:
            return
        with open(self.path, "a") as fh:
            for key, value in self._dirty.items():
                obj = value.to_json_obj()
                fh.write(
                    json.dumps(
                        {"key": key, "value": obj, "checksum": self._checksum(key, obj)}
                    )
                    + "\n"
                )
        self._dirty.clear()


_session_cache = MemoCache()


def default_cache() -> MemoCache:
    """The process-wide cache; honors the REFINED_FLOOR_CACHE env variable."""
    global _session_cache
    path = os.environ.get("REFINED_FLOOR_CACHE")
    if path and _session_cache.path != path:
        _session_cache = MemoCache(path)
    return _session_cache


def ch_count(
    d: CurveClass,
    genus: int,
    mu1: Partition,
    mu2: Partition,
    cache: Optional[MemoCache] = None,
) -> HalfLaurent:
    """The refined count N_q^{μ1,μ2}(d, genus) by recursion."""
    key = CHKey(d, genus, make(mu1), make(mu2))
    key.validate()
    if cache is None:
        cache = default_cache()
    value = _ch(key, cache)
    cache.flush()
    return value


def _ch(key: CHKey, cache: MemoCache) -> HalfLaurent:
    ck = key.canonical()
    ks = ck.to_string()
    hit = cache.get(ks)
    if hit is not None:
        return hit
    d, gp, mu1, mu2 = ck.d, ck.genus, ck.mu1, ck.mu2
    n = d.dot_L() - 1 + gp + length(mu2)
    if n == 0 or d.dot_L() <= 0:
        value = _base_value(ck)
        cache.put(ks, value)
        return value

    measure = (d.dot_L(), length(mu2))
    total = HalfLaurent.zero()

    # first sum: trade one free tangency for a fixed one
    for w in sorted(set(mu2)):
        sub = CHKey(d, gp, union(mu1, (w,)), diff(mu2, (w,)))
        if not ((sub.d.dot_L(), length(sub.mu2)) < measure):
            raise NonTermination(f"first sum failed to decrease at {ks}")
        total = total + _ch(sub, cache).scale(w)

    # second sum: degenerate onto the conic
    ntot = d.dot_L() + gp - 2 + length(mu2)
    for sp in enumerate_splittings(ck):
        slots = [p.n_slots() for p in sp.parts]
        if sum(slots) != ntot:
            raise SpecInvalid(f"slot identity violated at {ks}: {slots} vs {ntot}")
        if size(sp.xi) - size(sp.eta) != d.k - 4:
            raise SpecInvalid(f"fiber identity violated at {ks}")
        coeff = Fraction(multinomial(ntot, slots), sp.sigma)
        coeff *= partition_binomial(mu1, [p.mu1 for p in sp.parts])
        for p in sp.parts:
            coeff *= partition_binomial(p.mu2, [diff(p.mu2, p.xi)])
        term = HalfLaurent.constant(coeff)
        for p in sp.parts:
            sub = CHKey(p.d, p.genus, p.mu1, p.mu2)
            if not ((sub.d.dot_L(), length(sub.mu2)) < measure):
                raise NonTermination(f"splitting failed to decrease at {ks}")
            term = term * _ch(sub, cache)
            if term.is_zero():
                break
        for x in sp.xi:
            term = term * quantum_integer(x)
        for y in sp.eta:
            term = term * quantum_integer(y).scale(Fraction(1, y))
        total = total + term
    cache.put(ks, total)
    return total
