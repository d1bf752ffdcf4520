"""Floor diagrams: weighted oriented acyclic graphs with floors and leaves.

A floor diagram of degree d has floors of divergence 2 (kind Floor1,
always sinks) or 4 (kind Floor2), and leaves — degree-1 vertices whose
single edge is outgoing, pointing into a floor.  Leaf weights add up to
2d, and the first Betti number of the underlying graph is the genus.

Vertices are identified by integer ids; floors always come first (all
Floor2 ids, then all Floor1 ids, then leaves), which generation and
canonicalization rely on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product
from typing import Iterator

from .partitions import partitions_of

FLOOR1 = "Floor1"
FLOOR2 = "Floor2"
LEAF = "Leaf"


class UnknownVertex(KeyError):
    pass


@dataclass(frozen=True)
class FloorDiagram:
    """Immutable floor diagram: vertex kinds by id plus weighted edges (src, dst, w)."""

    kinds: tuple[str, ...]
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    # -- basic views --------------------------------------------------------

    def vertex_ids(self) -> range:
        return range(len(self.kinds))

    def floors(self) -> list[int]:
        return [v for v, k in enumerate(self.kinds) if k in (FLOOR1, FLOOR2)]

    def leaves(self) -> list[int]:
        return [v for v, k in enumerate(self.kinds) if k == LEAF]

    def divergence(self, v: int) -> int:
        if not 0 <= v < len(self.kinds):
            raise UnknownVertex(v)
        return sum(w for _, dst, w in self.edges if dst == v) - sum(
            w for src, _, w in self.edges if src == v
        )

    def degree(self) -> int:
        """Half the total leaf out-flow; also #Floor1 + 2·#Floor2."""
        return -sum(self.divergence(v) for v in self.leaves()) // 2

    def genus(self) -> int:
        return len(self.edges) - len(self.kinds) + 1

    def inner_edges(self) -> list[tuple[int, int, int]]:
        """Floor-to-floor edges (the complement of the leaf ends)."""
        return [e for e in self.edges if self.kinds[e[0]] != LEAF]

    def leaf_edges(self) -> list[tuple[int, int, int]]:
        return [e for e in self.edges if self.kinds[e[0]] == LEAF]

    def leaf_weights_by_floor(self) -> dict[int, tuple[int, ...]]:
        """floor id → sorted multiset of weights of leaves attached to it."""
        acc: dict[int, list[int]] = {f: [] for f in self.floors()}
        for src, dst, w in self.leaf_edges():
            acc[dst].append(w)
        return {f: tuple(sorted(ws)) for f, ws in acc.items()}

    # -- serialization --------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "vertices": [{"id": v, "kind": k} for v, k in enumerate(self.kinds)],
            "edges": [{"src": s, "dst": d, "w": w} for s, d, w in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "FloorDiagram":
        n = len(obj["vertices"])
        kinds = [""] * n
        for rec in obj["vertices"]:
            kinds[rec["id"]] = rec["kind"]
        edges = tuple((e["src"], e["dst"], e["w"]) for e in obj["edges"])
        return cls(tuple(kinds), edges)

    @classmethod
    def from_json(cls, text: str) -> "FloorDiagram":
        return cls.from_json_obj(json.loads(text))

    def to_dot(self) -> str:
        """GraphViz export; edges are drawn bottom-to-top."""
        lines = ["digraph D {", "  rankdir=BT;"]
        shapes = {FLOOR1: "ellipse", FLOOR2: "doublecircle", LEAF: "point"}
        for v, k in enumerate(self.kinds):
            lines.append(f'  v{v} [shape={shapes[k]}, label="{k[0] if k != LEAF else ""}{v}"];')
        for s, d, w in self.edges:
            label = f' [label="{w}"]' if w != 1 else ""
            lines.append(f"  v{s} -> v{d}{label};")
        lines.append("}")
        return "\n".join(lines)


def divergence(diagram: FloorDiagram, v: int) -> int:
    return diagram.divergence(v)


def _is_acyclic(n: int, arcs: list[tuple[int, int]]) -> bool:
    out: dict[int, set[int]] = {v: set() for v in range(n)}
    indeg = {v: 0 for v in range(n)}
    for s, d in arcs:
        if d not in out[s]:
            out[s].add(d)
            indeg[d] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for u in out[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                stack.append(u)
    return seen == n


def _is_connected(n: int, arcs: list[tuple[int, int]]) -> bool:
    if n <= 1:
        return True
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for s, d in arcs:
        adj[s].add(d)
        adj[d].add(s)
    seen = {0}
    stack = [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def validate(diagram: FloorDiagram, degree: int, genus: int) -> list[str]:
    """All violations of the floor-diagram axioms at the given (degree, genus)."""
    v = []
    n = len(diagram.kinds)
    arcs = [(s, d) for s, d, _ in diagram.edges]
    if any(w < 1 for _, _, w in diagram.edges):
        v.append("edge weights must be positive")
    if not _is_connected(n, arcs):
        v.append("underlying graph is not connected")
    if not _is_acyclic(n, arcs):
        v.append("oriented graph has a cycle")
    if diagram.genus() != genus:
        v.append(f"first Betti number {diagram.genus()} != genus {genus}")
    f1 = f2 = 0
    for u, kind in enumerate(diagram.kinds):
        div = diagram.divergence(u)
        outgoing = [e for e in diagram.edges if e[0] == u]
        incident = outgoing + [e for e in diagram.edges if e[1] == u]
        if kind == FLOOR1:
            f1 += 1
            if div != 2:
                v.append(f"Floor1 vertex {u} has divergence {div}, expected 2")
            if outgoing:
                v.append(f"Floor1 vertex {u} is not a sink")
        elif kind == FLOOR2:
            f2 += 1
            if div != 4:
                v.append(f"Floor2 vertex {u} has divergence {div}, expected 4")
        elif kind == LEAF:
            if len(incident) != 1 or len(outgoing) != 1:
                v.append(f"leaf {u} must have exactly one edge, outgoing")
            elif div > -1:
                v.append(f"leaf {u} has divergence {div} > -1")
        else:
            v.append(f"unknown vertex kind {kind!r} at {u}")
    leaf_flow = -sum(diagram.divergence(u) for u in diagram.leaves())
    if leaf_flow != 2 * degree:
        v.append(f"total leaf out-flow {leaf_flow} != 2*degree {2 * degree}")
    if f1 + 2 * f2 != degree:
        v.append(f"#Floor1 + 2*#Floor2 = {f1 + 2 * f2} != degree {degree}")
    return v


# -- canonical forms and automorphisms -------------------------------------
#
# Leaves are fully determined by (attached floor, weight), so a diagram is
# encoded as the floor multigraph plus per-floor leaf-weight multisets, and
# only floor permutations need to be searched (kind-preserving).


def _structure(diagram: FloorDiagram):
    floors = diagram.floors()
    f2s = [f for f in floors if diagram.kinds[f] == FLOOR2]
    f1s = [f for f in floors if diagram.kinds[f] == FLOOR1]
    inner = diagram.inner_edges()
    leafw = diagram.leaf_weights_by_floor()
    return f2s, f1s, inner, leafw


def _floor_permutations(f2s, f1s) -> Iterator[dict[int, int]]:
    """Kind-preserving relabelings onto positions 0..nf-1 (Floor2 first)."""
    n2 = len(f2s)
    for p2 in permutations(range(n2)):
        for p1 in permutations(range(len(f1s))):
            m = {f: p2[i] for i, f in enumerate(f2s)}
            m.update({f: n2 + p1[i] for i, f in enumerate(f1s)})
            yield m


def _encode(f2s, f1s, inner, leafw, relabel: dict[int, int]):
    edges = tuple(sorted((relabel[s], relabel[d], w) for s, d, w in inner))
    byfloor = [None] * (len(f2s) + len(f1s))
    for f, ws in leafw.items():
        byfloor[relabel[f]] = ws
    return (len(f2s), len(f1s), edges, tuple(byfloor))


def canonical_form(diagram: FloorDiagram):
    """Hashable encoding, equal for two diagrams iff they are isomorphic."""
    f2s, f1s, inner, leafw = _structure(diagram)
    return min(_encode(f2s, f1s, inner, leafw, m) for m in _floor_permutations(f2s, f1s))


def floor_symmetries(diagram: FloorDiagram) -> list[dict[int, int]]:
    """Kind-preserving floor permutations fixing the decorated structure.

    Returned as maps floor id → floor id (not positions).
    """
    f2s, f1s, inner, leafw = _structure(diagram)
    floors = f2s + f1s
    ident = _encode(f2s, f1s, inner, leafw, {f: i for i, f in enumerate(floors)})
    syms = []
    for m in _floor_permutations(f2s, f1s):
        if _encode(f2s, f1s, inner, leafw, m) == ident:
            syms.append({f: floors[m[f]] for f in floors})
    return syms


def automorphism_count(diagram: FloorDiagram) -> int:
    """Order of the automorphism group (vertex and edge bijections jointly).

    Identical leaves on the same floor are interchangeable, as are parallel
    inner edges of equal weight.
    """
    f2s, f1s, inner, leafw = _structure(diagram)
    count = len(floor_symmetries(diagram))
    for ws in leafw.values():
        for w in set(ws):
            count *= _factorial(ws.count(w))
    for e in set(inner):
        count *= _factorial(inner.count(e))
    return count


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


# -- exhaustive generation ---------------------------------------------------


def generate(degree: int, genus: int) -> Iterator[FloorDiagram]:
    """All floor diagrams of the given degree and genus, one per isomorphism class.

    Floors are chosen first (#Floor1 + 2·#Floor2 = degree), then the inner
    multigraph with #edges = #floors − 1 + genus, then per-floor leaf weights
    absorbing the residual divergence.
    """
    if degree < 1 or genus < 0:
        raise ValueError("generate needs degree >= 1, genus >= 0")
    seen = set()
    for f2 in range(degree // 2 + 1):
        f1 = degree - 2 * f2
        nf = f1 + f2
        ninner = nf - 1 + genus
        # Floor ids: Floor2 = 0..f2-1, Floor1 = f2..nf-1.
        pairs = [(s, d) for s in range(f2) for d in range(nf) if d != s]
        triples = [(s, d, w) for s, d in pairs for w in range(1, 2 * degree + 1)]
        for inner in combinations_with_replacement(triples, ninner):
            arcs = [(s, d) for s, d, _ in inner]
            if not _is_connected(nf, arcs) or not _is_acyclic(nf, arcs):
                continue
            residual = []
            ok = True
            for f in range(nf):
                target = 4 if f < f2 else 2
                div = sum(w for _, d, w in inner if d == f) - sum(
                    w for s, _, w in inner if s == f
                )
                s_v = target - div
                if s_v < 0:
                    ok = False
                    break
                residual.append(s_v)
            if not ok:
                continue
            for leaf_choice in product(*(partitions_of(s) for s in residual)):
                diagram = _materialize(f2, f1, inner, leaf_choice)
                key = canonical_form(diagram)
                if key not in seen:
                    seen.add(key)
                    yield diagram


def _materialize(f2: int, f1: int, inner, leaf_choice) -> FloorDiagram:
    nf = f1 + f2
    kinds = [FLOOR2] * f2 + [FLOOR1] * f1
    edges = list(inner)
    for f, ws in enumerate(leaf_choice):
        for w in ws:
            leaf_id = len(kinds)
            kinds.append(LEAF)
            edges.append((leaf_id, f, w))
    return FloorDiagram(tuple(kinds), tuple(edges))
