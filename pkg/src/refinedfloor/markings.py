"""Markings of floor diagrams and their multiplicities.

A marking of type (μ1, μ2) distributes the label sets A_0, A_1, ..., A_k
over a floor diagram:

* A_0 = {1, ..., d·L − 1 + g' + l(μ1) + l(μ2)} is totally ordered and is
  placed increasingly with respect to the orientation order; labels
  1..l(μ1) sit on leaf vertices whose end weights follow μ1, exactly
  l(μ2) further labels sit on leaf *edges* whose weights form the
  multiset μ2, and the rest exhaust the divergence-4 floors and the
  inner edges.
* A_i (i ≥ 1) has d·E_i unordered elements, each on a distinct leaf of
  end weight 1, at most one per floor.

Two markings are equivalent when they differ by an automorphism of the
diagram together with permutations inside each A_i (A_0 is fixed
pointwise).  Enumeration works on the quotient directly: leaves are
grouped into interchangeability classes by (floor, weight), identical
parallel slots are chained so each orbit appears once, and the residual
floor symmetries are removed with a canonical-minimum filter.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Optional

from .classes import CurveClass, SpecInvalid
from .diagrams import FLOOR1, FLOOR2, LEAF, FloorDiagram, floor_symmetries
from .partitions import Partition
from .qalgebra import HalfLaurent, quantum_integer


@dataclass(frozen=True)
class MarkingSpec:
    """A counting problem: curve class, genus and tangency type (μ1, μ2)."""

    d: CurveClass
    genus: int
    mu1: Partition
    mu2: Partition

    def validate(self) -> None:
        if self.d.dot_L() < 1:
            raise SpecInvalid(f"d·L = {self.d.dot_L()} must be >= 1")
        for i in range(1, self.d.k + 1):
            if self.d.dot_Ei(i) < 0:
                raise SpecInvalid(f"d·E_{i} = {self.d.dot_Ei(i)} must be >= 0")
        if self.genus < 0:
            raise SpecInvalid("genus must be >= 0")
        if sum(self.mu1) + sum(self.mu2) != self.d.dot_E():
            raise SpecInvalid(
                f"|mu1| + |mu2| = {sum(self.mu1) + sum(self.mu2)} != d·E = {self.d.dot_E()}"
            )

    def a0_size(self) -> int:
        return self.d.dot_L() - 1 + self.genus + len(self.mu1) + len(self.mu2)


@dataclass(frozen=True)
class MarkedDiagram:
    """A diagram plus an explicit injective assignment of all labels.

    a0 maps each A_0 label to a vertex ("v", id) or edge ("e", index);
    ai maps each block index i >= 1 to the leaf vertices it marks.
    """

    diagram: FloorDiagram
    a0: tuple[tuple[int, tuple[str, int]], ...]
    ai: tuple[tuple[int, tuple[int, ...]], ...]

    def to_json_obj(self) -> dict:
        return {
            "A0": [
                {"label": lab, "target": f"{kind}{idx}"} for lab, (kind, idx) in self.a0
            ],
            "Ai": {str(i): [f"v{v}" for v in vs] for i, vs in self.ai},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


# -- leaf interchangeability classes ----------------------------------------


@dataclass(frozen=True)
class _LeafClass:
    floor: int
    weight: int
    leaf_ids: tuple[int, ...]
    edge_idxs: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.leaf_ids)


def _leaf_classes(diagram: FloorDiagram) -> list[_LeafClass]:
    groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for idx, (src, dst, w) in enumerate(diagram.edges):
        if diagram.kinds[src] == LEAF:
            groups.setdefault((dst, w), []).append((src, idx))
    out = []
    for (floor, w), members in sorted(groups.items()):
        members.sort()
        out.append(
            _LeafClass(floor, w, tuple(v for v, _ in members), tuple(i for _, i in members))
        )
    return out


def _inner_classes(diagram: FloorDiagram) -> list[tuple[tuple[int, int, int], tuple[int, ...]]]:
    groups: dict[tuple[int, int, int], list[int]] = {}
    for idx, (src, dst, w) in enumerate(diagram.edges):
        if diagram.kinds[src] != LEAF:
            groups.setdefault((src, dst, w), []).append(idx)
    return sorted((key, tuple(sorted(v))) for key, v in groups.items())


# -- structural assignments ---------------------------------------------------
#
# An assignment says, per leaf class, which μ1 labels, how many μ2 ends and
# which A_i blocks it hosts.  Leaves inside a class are interchangeable, so
# this is already one representative per leaf-permutation orbit.


def _assignments(classes: list[_LeafClass], spec: MarkingSpec) -> Iterator[list[tuple]]:
    mu1_by_weight: dict[int, list[int]] = {}
    for i, w in enumerate(spec.mu1, start=1):
        mu1_by_weight.setdefault(w, []).append(i)
    mu2_left = Counter(spec.mu2)
    blocks_left = {
        i: spec.d.dot_Ei(i) for i in range(1, spec.d.k + 1) if spec.d.dot_Ei(i) > 0
    }

    def rec(ci: int, mu1_left: dict[int, list[int]], mu2_left: Counter, blocks_left: dict[int, int], acc: list):
        if ci == len(classes):
            if all(not v for v in mu1_left.values()) and not +mu2_left and not blocks_left:
                yield list(acc)
            return
        c = classes[ci]
        labels = mu1_left.get(c.weight, [])
        max_m = mu2_left.get(c.weight, 0)
        avail_blocks = sorted(blocks_left) if c.weight == 1 else []
        for t1 in range(min(len(labels), c.size) + 1):
            for S in combinations(labels, t1):
                for m in range(min(max_m, c.size - t1) + 1):
                    nb = c.size - t1 - m
                    if nb > len(avail_blocks):
                        continue
                    for B in combinations(avail_blocks, nb):
                        new_mu1 = dict(mu1_left)
                        new_mu1[c.weight] = [x for x in labels if x not in S]
                        new_mu2 = mu2_left.copy()
                        new_mu2[c.weight] -= m
                        new_blocks = dict(blocks_left)
                        for b in B:
                            new_blocks[b] -= 1
                            if new_blocks[b] == 0:
                                del new_blocks[b]
                        acc.append((S, m, B))
                        yield from rec(ci + 1, new_mu1, new_mu2, new_blocks, acc)
                        acc.pop()

    yield from rec(0, mu1_by_weight, mu2_left, blocks_left, [])


# -- the A_0 labeling poset ---------------------------------------------------


def _build_items(diagram: FloorDiagram, classes: list[_LeafClass], assignment: list[tuple]):
    """Items needing A_0 labels above l(μ1), with the precedence arcs.

    Chains over identical parallel inner edges and over the μ2 slots of one
    leaf class pick a single representative of each slot-permutation orbit.
    """
    items: list[tuple] = []
    index: dict[tuple, int] = {}

    def add(item: tuple) -> int:
        index[item] = len(items)
        items.append(item)
        return index[item]

    arcs: list[tuple[int, int]] = []
    floor2 = [v for v, k in enumerate(diagram.kinds) if k == FLOOR2]
    for f in floor2:
        add(("floor", f))
    inner = _inner_classes(diagram)
    for (src, dst, w), idxs in inner:
        prev = None
        for j in range(len(idxs)):
            it = add(("inner", (src, dst, w), j))
            if prev is not None:
                arcs.append((prev, it))
            prev = it
        arcs.append((index[("floor", src)], index[("inner", (src, dst, w), 0)]))
        if diagram.kinds[dst] == FLOOR2:
            arcs.append((prev, index[("floor", dst)]))
    for ci, c in enumerate(classes):
        _, m, _ = assignment[ci]
        prev = None
        for j in range(m):
            it = add(("mu2", ci, j))
            if prev is not None:
                arcs.append((prev, it))
            prev = it
        if m and diagram.kinds[c.floor] == FLOOR2:
            arcs.append((prev, index[("floor", c.floor)]))
    return items, arcs


def _linear_extensions(n: int, arcs: list[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
    """All orderings of 0..n-1 compatible with the precedence arcs."""
    succ: dict[int, list[int]] = {i: [] for i in range(n)}
    indeg = [0] * n
    for a, b in arcs:
        succ[a].append(b)
        indeg[b] += 1

    order: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(order) == n:
            yield tuple(order)
            return
        for v in range(n):
            if indeg[v] == 0:
                indeg[v] = -1
                for u in succ[v]:
                    indeg[u] -= 1
                order.append(v)
                yield from rec()
                order.pop()
                for u in succ[v]:
                    indeg[u] += 1
                indeg[v] = 0

    yield from rec()


# -- canonical keys under the residual floor symmetries -----------------------


def _marking_key(diagram, classes, assignment, items, order, sigma: Optional[dict[int, int]] = None):
    """Canonical encoding of one marking, optionally relabeled by a floor symmetry."""
    s = (lambda f: f) if sigma is None else (lambda f: sigma[f])
    label_of = {items[it]: pos + 1 for pos, it in enumerate(order)}

    class_part = []
    for ci, c in enumerate(classes):
        S, m, B = assignment[ci]
        slots = tuple(sorted(label_of[("mu2", ci, j)] for j in range(m)))
        class_part.append((s(c.floor), c.weight, tuple(sorted(S)), slots, tuple(sorted(B))))
    floor_part = []
    inner_part: dict[tuple, list[int]] = {}
    for pos, it in enumerate(order):
        item = items[it]
        if item[0] == "floor":
            floor_part.append((s(item[1]), pos + 1))
        elif item[0] == "inner":
            src, dst, w = item[1]
            inner_part.setdefault((s(src), s(dst), w), []).append(pos + 1)
    return (
        tuple(sorted(class_part)),
        tuple(sorted(floor_part)),
        tuple(sorted((key, tuple(sorted(v))) for key, v in inner_part.items())),
    )


def enumerate_markings(
    diagram: FloorDiagram, spec: MarkingSpec, want_representatives: bool = True
) -> tuple[int, list[MarkedDiagram]]:
    """Count the marking equivalence classes of the diagram, with representatives."""
    spec.validate()
    if diagram.degree() != spec.d.dot_L() or diagram.genus() != spec.genus:
        return 0, []
    classes = _leaf_classes(diagram)
    symmetries = [m for m in floor_symmetries(diagram)]
    count = 0
    reps: list[MarkedDiagram] = []
    for assignment in _assignments(classes, spec):
        items, arcs = _build_items(diagram, classes, assignment)
        for order in _linear_extensions(len(items), arcs):
            key = _marking_key(diagram, classes, assignment, items, order)
            if len(symmetries) > 1:
                best = min(
                    _marking_key(diagram, classes, assignment, items, order, sigma)
                    for sigma in symmetries
                )
                if key != best:
                    continue
            count += 1
            if want_representatives:
                reps.append(_materialize_marking(diagram, classes, assignment, items, order, spec))
    return count, reps


def _visible_signature(diagram: FloorDiagram, classes, assignment):
    """What a drawing of the marked diagram shows, canonically relabeled.

    Floors, inner edges, μ1-labeled ends and tangency (μ2) ends are drawn;
    the weight-1 ends absorbed by the exceptional blocks are not.  Two
    marking classes with the same signature are indistinguishable pictures.
    """
    from .diagrams import _encode, _floor_permutations, _structure

    f2s, f1s, inner, leafw = _structure(diagram)
    best = None
    for m in _floor_permutations(f2s, f1s):
        enc = _encode(f2s, f1s, inner, leafw, m)
        visible = tuple(
            sorted(
                (m[c.floor], c.weight, tuple(sorted(S)), mm)
                for c, (S, mm, _) in zip(classes, assignment)
                if S or mm
            )
        )
        cand = (enc, visible)
        if best is None or cand < best:
            best = cand
    return best


def signature_census(diagram: FloorDiagram, spec: MarkingSpec) -> dict[tuple, int]:
    """Marking-class counts grouped by visible signature (drawing shape)."""
    spec.validate()
    if diagram.degree() != spec.d.dot_L() or diagram.genus() != spec.genus:
        return {}
    classes = _leaf_classes(diagram)
    symmetries = [m for m in floor_symmetries(diagram)]
    census: dict[tuple, int] = {}
    for assignment in _assignments(classes, spec):
        items, arcs = _build_items(diagram, classes, assignment)
        sig = None
        for order in _linear_extensions(len(items), arcs):
            key = _marking_key(diagram, classes, assignment, items, order)
            if len(symmetries) > 1:
                best = min(
                    _marking_key(diagram, classes, assignment, items, order, sigma)
                    for sigma in symmetries
                )
                if key != best:
                    continue
            if sig is None:
                sig = _visible_signature(diagram, classes, assignment)
            census[sig] = census.get(sig, 0) + 1
    return census


def _materialize_marking(diagram, classes, assignment, items, order, spec) -> MarkedDiagram:
    offset = len(spec.mu1)
    label_of = {items[it]: offset + pos + 1 for pos, it in enumerate(order)}
    a0: list[tuple[int, tuple[str, int]]] = []
    ai: dict[int, list[int]] = {}
    for ci, c in enumerate(classes):
        S, m, B = assignment[ci]
        cursor = 0
        for lab in sorted(S):
            a0.append((lab, ("v", c.leaf_ids[cursor])))
            cursor += 1
        slot_labels = sorted(label_of[("mu2", ci, j)] for j in range(m))
        for lab in slot_labels:
            a0.append((lab, ("e", c.edge_idxs[cursor])))
            cursor += 1
        for b in sorted(B):
            ai.setdefault(b, []).append(c.leaf_ids[cursor])
            cursor += 1
    for item, lab in label_of.items():
        if item[0] == "floor":
            a0.append((lab, ("v", item[1])))
        elif item[0] == "inner":
            src, dst, w = item[1]
            _, idxs = next(x for x in _inner_classes(diagram) if x[0] == (src, dst, w))
            # labels inside a parallel class are chained: j-th slot, j-th edge
            a0.append((lab, ("e", idxs[item[2]])))
    return MarkedDiagram(
        diagram,
        tuple(sorted(a0)),
        tuple(sorted((i, tuple(sorted(vs))) for i, vs in ai.items())),
    )


# -- validation of explicit markings ------------------------------------------


def _reachability(diagram: FloorDiagram) -> dict[tuple[str, int], set[tuple[str, int]]]:
    """For each vertex/edge, the strictly greater elements in the orientation order."""
    succ: dict[tuple[str, int], set[tuple[str, int]]] = {}
    for v in diagram.vertex_ids():
        succ[("v", v)] = set()
    for idx, (src, dst, _) in enumerate(diagram.edges):
        succ[("e", idx)] = {("v", dst)}
        succ[("v", src)].add(("e", idx))
    # transitive closure; diagrams are tiny
    changed = True
    while changed:
        changed = False
        for node, above in succ.items():
            extra = set().union(*(succ[x] for x in above)) - above if above else set()
            if extra:
                above.update(extra)
                changed = True
    return succ


def validate_marking(marked: MarkedDiagram, spec: MarkingSpec) -> list[str]:
    """All violations of the marking conditions for the given spec."""
    spec.validate()
    D = marked.diagram
    v: list[str] = []
    l1, l2 = len(spec.mu1), len(spec.mu2)

    a0 = dict(marked.a0)
    if sorted(a0) != list(range(1, spec.a0_size() + 1)):
        v.append(f"A_0 labels must be exactly 1..{spec.a0_size()}")
    targets = list(a0.values()) + [("v", lv) for _, vs in marked.ai for lv in vs]
    if len(set(targets)) != len(targets):
        v.append("marking is not injective")
    for i, vs in marked.ai:
        if len(vs) != spec.d.dot_Ei(i):
            v.append(f"block {i} must mark exactly {spec.d.dot_Ei(i)} leaves")
        if any(D.kinds[x] != LEAF for x in vs):
            v.append(f"block {i} marks a non-leaf")
        floors_hit = [D.edges[_leaf_edge(D, x)][1] for x in vs if D.kinds[x] == LEAF]
        if len(set(floors_hit)) != len(floors_hit):
            v.append(f"block {i} marks two leaves on one floor")
        if any(D.edges[_leaf_edge(D, x)][2] != 1 for x in vs if D.kinds[x] == LEAF):
            v.append(f"block {i} marks a leaf of weight != 1")

    # (1) increasing on A_0; no Floor1 in the image
    succ = _reachability(D)
    for lab, tgt in a0.items():
        if tgt[0] == "v" and D.kinds[tgt[1]] == FLOOR1:
            v.append(f"A_0 label {lab} sits on a divergence-2 floor")
    for i in sorted(a0):
        for j in sorted(a0):
            if i < j and a0[i] in succ.get(a0[j], set()):
                v.append(f"A_0 labels {i} < {j} violate the orientation order")

    # (2) per leaf, exactly one of {vertex, edge} marked
    marked_nodes = set(targets)
    for leaf in D.leaves():
        e = _leaf_edge(D, leaf)
        hits = (("v", leaf) in marked_nodes) + (("e", e) in marked_nodes)
        if hits != 1:
            v.append(f"leaf {leaf}: {hits} of its vertex/edge pair marked, expected 1")

    # (3) A_0 marks on leaves are exactly labels 1..l(mu1)
    leafset = set(D.leaves())
    a0_on_leaves = sorted(lab for lab, t in a0.items() if t[0] == "v" and t[1] in leafset)
    if a0_on_leaves != list(range(1, l1 + 1)):
        v.append(f"A_0 marks on leaf vertices are {a0_on_leaves}, expected 1..{l1}")

    # (5) label i <= l(mu1) sits on a leaf of weight mu1^(i)
    for i in range(1, l1 + 1):
        t = a0.get(i)
        if t and t[0] == "v" and t[1] in leafset:
            w = D.edges[_leaf_edge(D, t[1])][2]
            if w != spec.mu1[i - 1]:
                v.append(f"label {i} on a weight-{w} end, expected {spec.mu1[i - 1]}")

    # (6) exactly l(mu2) A_0-marked ends, with weights forming mu2 as a multiset
    end_weights = sorted(
        D.edges[t[1]][2]
        for t in a0.values()
        if t[0] == "e" and D.kinds[D.edges[t[1]][0]] == LEAF
    )
    if end_weights != sorted(spec.mu2):
        v.append(f"A_0-marked end weights {end_weights} != mu2 {sorted(spec.mu2)}")
    return v


def _leaf_edge(diagram: FloorDiagram, leaf: int) -> int:
    for idx, (src, _, _) in enumerate(diagram.edges):
        if src == leaf:
            return idx
    raise ValueError(f"vertex {leaf} has no outgoing edge")


# -- multiplicities ------------------------------------------------------------


def type_mult_refined(diagram: FloorDiagram, mu1: Partition, mu2: Partition) -> HalfLaurent:
    """q-refined multiplicity; depends only on the diagram and the type.

    Π over μ2 ends of [w]_q, over μ1 ends of [w]_q / w, and over inner
    edges of [w]_q².
    """
    out = HalfLaurent.one()
    for w in mu2:
        out = out * quantum_integer(w)
    for w in mu1:
        out = out * quantum_integer(w).scale(Fraction(1, w))
    for _, _, w in diagram.inner_edges():
        out = out * quantum_integer(w) * quantum_integer(w)
    return out


def type_mult_complex(diagram: FloorDiagram, mu2: Partition) -> Fraction:
    out = Fraction(1)
    for w in mu2:
        out *= w
    for _, _, w in diagram.inner_edges():
        out *= w * w
    return out


def _marking_type(marked: MarkedDiagram) -> tuple[tuple[int, ...], tuple[int, ...]]:
    D = marked.diagram
    leafset = set(D.leaves())
    a0 = dict(marked.a0)
    mu1 = tuple(
        D.edges[_leaf_edge(D, t[1])][2]
        for lab, t in sorted(a0.items())
        if t[0] == "v" and t[1] in leafset
    )
    mu2 = tuple(
        sorted(D.edges[t[1]][2] for t in a0.values() if t[0] == "e" and D.kinds[D.edges[t[1]][0]] == LEAF)
    )
    return mu1, mu2


def mult_refined(marked: MarkedDiagram) -> HalfLaurent:
    mu1, mu2 = _marking_type(marked)
    return type_mult_refined(marked.diagram, mu1, mu2)


def mult_complex(marked: MarkedDiagram) -> Fraction:
    _, mu2 = _marking_type(marked)
    return type_mult_complex(marked.diagram, mu2)
