"""Weighted dual graphs of rational curves and their intersection lattices.

A node of weight ``w`` stands for a smooth rational curve of self-intersection
``-w``.  Edges carry the intersection multiplicity between two distinct curves.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from . import linalg

MIN_WEIGHT = -8
MAX_MULTIPLICITY = 3


class MalformedGraphError(ValueError):
    """Raised for graphs that break the structural invariants."""


@dataclass(frozen=True, order=True)
class CurveNode:
    id: int
    weight: int


@dataclass(frozen=True)
class DualGraph:
    """Immutable weighted multigraph.

    ``edges`` is normalized to sorted triples ``(a, b, multiplicity)`` with
    ``a < b`` and parallel entries merged.
    """

    nodes: tuple[CurveNode, ...]
    edges: tuple[tuple[int, int, int], ...] = ()
    _adj: Mapping[int, Mapping[int, int]] = field(
        default=None, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        nodes = tuple(self.nodes)
        ids = [n.id for n in nodes]
        if len(set(ids)) != len(ids):
            raise MalformedGraphError(f"duplicate node ids in {ids}")
        for n in nodes:
            if n.weight < MIN_WEIGHT:
                raise MalformedGraphError(
                    f"node {n.id} has weight {n.weight} < {MIN_WEIGHT}"
                )
        known = set(ids)
        merged: dict[tuple[int, int], int] = defaultdict(int)
        for e in self.edges:
            if len(e) == 2:
                a, b, mult = e[0], e[1], 1
            elif len(e) == 3:
                a, b, mult = e
            else:
                raise MalformedGraphError(f"bad edge record {e!r}")
            if a == b:
                raise MalformedGraphError(f"self-loop at node {a}")
            if a not in known or b not in known:
                raise MalformedGraphError(f"edge {e!r} has a dangling endpoint")
            if mult < 1:
                raise MalformedGraphError(f"edge {e!r} has multiplicity < 1")
            merged[(min(a, b), max(a, b))] += mult
        for key, mult in merged.items():
            if mult > MAX_MULTIPLICITY:
                raise MalformedGraphError(
                    f"edge {key} has multiplicity {mult} > {MAX_MULTIPLICITY}"
                )
        adj: dict[int, dict[int, int]] = {i: {} for i in ids}
        for (a, b), mult in merged.items():
            adj[a][b] = mult
            adj[b][a] = mult
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(
            self, "edges", tuple(sorted((a, b, m) for (a, b), m in merged.items()))
        )
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_wmap", {n.id: n.weight for n in nodes})

    # -- construction helpers -------------------------------------------------

    @classmethod
    def chain(cls, weights: Sequence[int], start: int = 0) -> "DualGraph":
        nodes = tuple(CurveNode(start + i, w) for i, w in enumerate(weights))
        edges = tuple((start + i, start + i + 1, 1) for i in range(len(weights) - 1))
        return cls(nodes, edges)

    @classmethod
    def star(cls, center: int, arms: Iterable[Sequence[int]]) -> "DualGraph":
        """Center node 0 with chain arms, each listed outward from the center."""
        nodes = [CurveNode(0, center)]
        edges = []
        for arm in arms:
            prev = 0
            for w in arm:
                nid = len(nodes)
                nodes.append(CurveNode(nid, w))
                edges.append((prev, nid, 1))
                prev = nid
        return cls(tuple(nodes), tuple(edges))

    @classmethod
    def from_dict(cls, data: Mapping) -> "DualGraph":
        try:
            nodes = tuple(CurveNode(int(n["id"]), int(n["w"])) for n in data["nodes"])
            edges = []
            for e in data.get("edges", []):
                if len(e) not in (2, 3):
                    raise MalformedGraphError(f"bad edge record {e!r}")
                edges.append(tuple(int(x) for x in e) if len(e) == 3 else (int(e[0]), int(e[1]), 1))
        except (KeyError, TypeError) as exc:
            raise MalformedGraphError(f"graph JSON does not match schema: {exc}") from exc
        return cls(nodes, tuple(edges))

    @classmethod
    def from_json(cls, text: str) -> "DualGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedGraphError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "nodes": [{"id": n.id, "w": n.weight} for n in self.nodes],
            "edges": [[a, b, m] for a, b, m in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    # -- queries ----------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[CurveNode]:
        return iter(self.nodes)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(n.id for n in self.nodes)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(n.weight for n in self.nodes)

    def weight(self, node_id: int) -> int:
        return self._wmap[node_id]

    def neighbors(self, node_id: int) -> Mapping[int, int]:
        """Neighbor id -> intersection multiplicity."""
        return self._adj[node_id]

    def valence(self, node_id: int) -> int:
        return len(self._adj[node_id])

    def multiplicity(self, a: int, b: int) -> int:
        return self._adj[a].get(b, 0)

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        start = self.nodes[0].id
        seen = {start}
        stack = [start]
        while stack:
            for nb in self._adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == len(self.nodes)

    def is_tree(self) -> bool:
        """Connected, simple (all multiplicities 1) and acyclic."""
        if not self.nodes:
            return False
        if any(m != 1 for _, _, m in self.edges):
            return False
        return len(self.edges) == len(self.nodes) - 1 and self.is_connected()

    def is_chain(self) -> bool:
        return self.is_tree() and all(self.valence(i) <= 2 for i in self.ids)

    def chain_order(self) -> list[int]:
        """Node ids of a chain from its lowest-id end to the other end."""
        if not self.is_chain():
            raise MalformedGraphError("graph is not a chain")
        if len(self.nodes) == 1:
            return [self.nodes[0].id]
        ends = sorted(i for i in self.ids if self.valence(i) == 1)
        order = [ends[0]]
        prev = None
        while len(order) < len(self.nodes):
            cur = order[-1]
            nxt = next(j for j in self._adj[cur] if j != prev)
            prev = cur
            order.append(nxt)
        return order

    def with_weights(self, weights: Mapping[int, int]) -> "DualGraph":
        nodes = tuple(CurveNode(n.id, weights.get(n.id, n.weight)) for n in self.nodes)
        return DualGraph(nodes, self.edges)

    def subgraph(self, ids: Iterable[int]) -> "DualGraph":
        keep = set(ids)
        nodes = tuple(n for n in self.nodes if n.id in keep)
        edges = tuple(e for e in self.edges if e[0] in keep and e[1] in keep)
        return DualGraph(nodes, edges)

    def relabel(self, mapping: Mapping[int, int]) -> "DualGraph":
        nodes = tuple(
            sorted((CurveNode(mapping[n.id], n.weight) for n in self.nodes), key=lambda n: n.id)
        )
        edges = tuple((mapping[a], mapping[b], m) for a, b, m in self.edges)
        return DualGraph(nodes, edges)

    def disjoint_union(self, other: "DualGraph") -> "DualGraph":
        shift = max(self.ids, default=-1) + 1 - min(other.ids, default=0)
        moved = other.relabel({i: i + shift for i in other.ids})
        return DualGraph(self.nodes + moved.nodes, self.edges + moved.edges)


def disjoint_union(graphs: Iterable[DualGraph]) -> DualGraph:
    out = DualGraph(())
    for g in graphs:
        out = out.disjoint_union(g)
    return out


@dataclass(frozen=True)
class IntersectionMatrix:
    """Symmetric integer matrix of pairings D_i . D_j, indexed by ``ids``."""

    ids: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.ids)
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError("matrix shape does not match ids")

    @property
    def size(self) -> int:
        return len(self.ids)

    def entry(self, a: int, b: int) -> int:
        return self.rows[self.ids.index(a)][self.ids.index(b)]

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    def weights(self) -> tuple[int, ...]:
        return tuple(-self.rows[i][i] for i in range(self.size))


def build_matrix(g: DualGraph) -> IntersectionMatrix:
    index = {nid: k for k, nid in enumerate(g.ids)}
    n = len(index)
    rows = [[0] * n for _ in range(n)]
    for node in g.nodes:
        rows[index[node.id]][index[node.id]] = -node.weight
    for a, b, m in g.edges:
        rows[index[a]][index[b]] += m
        rows[index[b]][index[a]] += m
    return IntersectionMatrix(g.ids, tuple(tuple(r) for r in rows))


def is_negative_definite(m: IntersectionMatrix) -> bool:
    """Sylvester's criterion: (-1)^k times the k-th leading minor is positive."""
    if not m.is_symmetric():
        raise ValueError("intersection matrix must be symmetric")
    minors = linalg.leading_minors(m.rows)
    return all((-1) ** (k + 1) * d > 0 for k, d in enumerate(minors))


def determinant(m: IntersectionMatrix) -> int:
    return linalg.bareiss_determinant(m.rows)


def adjunction_degree(g: DualGraph) -> list[int]:
    """K . D_i for every node, by adjunction on a rational curve."""
    return [n.weight - 2 for n in g.nodes]


def connected_components(g: DualGraph) -> list[DualGraph]:
    """Components in order of their smallest node id; ids are preserved."""
    seen: set[int] = set()
    comps = []
    for start in sorted(g.ids):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        members = []
        while stack:
            cur = stack.pop()
            members.append(cur)
            for nb in g.neighbors(cur):
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        comps.append(g.subgraph(members))
    return comps


def validate_singularity_graph(g: DualGraph) -> None:
    """Exceptional curves of a minimal resolution: a tree with weights >= 2."""
    if not g.nodes:
        raise MalformedGraphError("singularity graph is empty")
    if not g.is_connected():
        raise MalformedGraphError("singularity graph must be connected")
    if not g.is_tree():
        raise MalformedGraphError("singularity graph must be a tree with simple edges")
    low = [n.id for n in g.nodes if n.weight < 2]
    if low:
        raise MalformedGraphError(f"nodes {low} have weight < 2")


# -- canonical forms -----------------------------------------------------------


def star_arms(g: DualGraph) -> tuple[int, list[tuple[int, ...]]] | None:
    """For a tree with a single branch node: (center id, arm weight lists).

    Arms are read outward from the center.  Returns None for other shapes.
    """
    if not g.is_tree():
        return None
    branch = [i for i in g.ids if g.valence(i) >= 3]
    if len(branch) != 1:
        return None
    center = branch[0]
    arms = []
    for first in sorted(g.neighbors(center)):
        arm = []
        prev, cur = center, first
        while True:
            arm.append(g.weight(cur))
            nxt = [j for j in g.neighbors(cur) if j != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            prev, cur = cur, nxt[0]
        arms.append(tuple(arm))
    return center, arms


def canonical_key(g: DualGraph) -> tuple:
    """Isomorphism-invariant key for rods and star-shaped trees.

    Rods: ("rod", min(seq, reversed seq)).  Stars: ("fork", center weight,
    arms sorted by (length, weights)).  Anything else falls back to a key
    built from the labelled data, which is *not* invariant.
    """
    if len(g.nodes) >= 1 and g.is_chain():
        seq = tuple(g.weight(i) for i in g.chain_order())
        return ("rod", min(seq, seq[::-1]))
    star = star_arms(g)
    if star is not None:
        center, arms = star
        return ("fork", g.weight(center), tuple(sorted(arms, key=lambda a: (len(a), a))))
    return ("raw", g.weights, g.edges)


def canonical_form(g: DualGraph) -> DualGraph:
    """Relabel a rod or fork into its canonical numbering.

    Rods are numbered 0..r-1 along the canonical orientation; forks put the
    center at 0 and then each arm outward in canonical arm order.  Other graphs
    are returned with ids compacted to 0..n-1 in their existing order.
    """
    key = canonical_key(g)
    if key[0] == "rod":
        return DualGraph.chain(key[1])
    if key[0] == "fork":
        return DualGraph.star(key[1], key[2])
    return g.relabel({nid: k for k, nid in enumerate(g.ids)})


def to_dot(g: DualGraph, name: str = "G", canonical: bool = True) -> str:
    """Graphviz text with each node labelled by its self-intersection."""
    h = canonical_form(g) if canonical else g
    lines = [f"graph {name} {{"]
    for n in h.nodes:
        lines.append(f'  n{n.id} [label="{-n.weight}"];')
    for a, b, m in h.edges:
        attr = f' [label="{m}"]' if m > 1 else ""
        lines.append(f"  n{a} -- n{b}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TreeShape:
    """Unweighted tree with nodes numbered so that ``parent[i] < i``.

    Node 0 is the root (``parent[0] == -1``).  Reversed index order is a
    valid leaves-first elimination order.  Used by the vectorized kernels,
    which take one row of weights per tree.
    """

    parent: tuple[int, ...]

    def __post_init__(self):
        par = tuple(self.parent)
        if not par or par[0] != -1:
            raise MalformedGraphError("tree shape must start with the root")
        if any(not 0 <= p < i for i, p in enumerate(par) if i > 0):
            raise MalformedGraphError("parent[i] must lie in [0, i)")
        object.__setattr__(self, "parent", par)

    @property
    def size(self) -> int:
        return len(self.parent)

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in self.parent]
        for i, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(i)
        return kids

    def valences(self) -> list[int]:
        val = [0] * self.size
        for i, p in enumerate(self.parent):
            if p >= 0:
                val[i] += 1
                val[p] += 1
        return val

    def edges(self) -> list[tuple[int, int]]:
        return [(p, i) for i, p in enumerate(self.parent) if p >= 0]

    def graph(self, weights: Sequence[int]) -> DualGraph:
        nodes = tuple(CurveNode(i, int(w)) for i, w in enumerate(weights))
        return DualGraph(nodes, tuple((a, b, 1) for a, b in self.edges()))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> tuple["TreeShape", list[int]]:
        """BFS-renumber a tree on vertices 0..n-1 from vertex 0.

        Returns the shape and ``order`` with ``order[new] = old``.
        """
        adj: dict[int, list[int]] = {i: [] for i in range(n)}
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        order = [0]
        parent_old = {0: None}
        k = 0
        while k < len(order):
            cur = order[k]
            for nb in sorted(adj[cur]):
                if nb not in parent_old:
                    parent_old[nb] = cur
                    order.append(nb)
            k += 1
        if len(order) != n:
            raise MalformedGraphError("edges do not form a connected tree")
        new = {old: i for i, old in enumerate(order)}
        parent = tuple(-1 if parent_old[o] is None else new[parent_old[o]] for o in order)
        return cls(parent), order

    @classmethod
    def from_graph(cls, g: DualGraph) -> tuple["TreeShape", list[int]]:
        """Shape of a tree graph; ``order[new] = node id``."""
        if not g.is_tree():
            raise MalformedGraphError("graph is not a tree")
        index = {nid: k for k, nid in enumerate(g.ids)}
        shape, order = cls.from_edges(len(index), [(index[a], index[b]) for a, b, _ in g.edges])
        return shape, [g.ids[k] for k in order]
