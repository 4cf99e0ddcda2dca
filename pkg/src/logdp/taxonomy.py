"""Combinatorial recognition of log terminal (quotient) surface singularities.

Minimal-resolution graphs of two-dimensional log terminal points are chains
("rods", cyclic quotients) or star-shaped trees with three chain arms whose
orders form a platonic triple ("forks").
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

import numpy as np

from .graph import DualGraph, TreeShape, build_matrix, canonical_form, determinant, star_arms

PLATONIC = ((2, 3, 3), (2, 3, 4), (2, 3, 5))


class ClassificationError(ValueError):
    pass


def is_platonic(orders: Sequence[int]) -> bool:
    d = tuple(sorted(orders))
    if len(d) != 3:
        return False
    return (d[0] == 2 and d[1] == 2 and d[2] >= 2) or d in PLATONIC


# -- Hirzebruch-Jung continued fractions -----------------------------------------


def hj_expand(n: int, q: int) -> list[int]:
    """Weights [w1, ..., wr] with n/q = w1 - 1/(w2 - 1/(... - 1/wr))."""
    if not (1 <= q < n) or gcd(n, q) != 1:
        raise ValueError(f"need 1 <= q < n and gcd(n, q) = 1, got ({n}, {q})")
    out = []
    while q:
        w = -(-n // q)
        out.append(w)
        n, q = q, w * q - n
    return out


def hj_contract(weights: Sequence[int]) -> tuple[int, int]:
    """Inverse of hj_expand; n is the determinant of the chain."""
    if not weights:
        raise ValueError("empty weight sequence")
    if any(w < 2 for w in weights):
        raise ValueError(f"weights must be >= 2, got {list(weights)}")
    n, q = 1, 0
    for w in reversed(weights):
        n, q = w * n - q, n
    return n, q


# -- classes -----------------------------------------------------------------------


@dataclass(frozen=True)
class Rod:
    n: int
    q: int

    @property
    def weights(self) -> list[int]:
        return hj_expand(self.n, self.q)

    def to_dict(self) -> dict:
        return {"kind": "rod", "n": self.n, "q": self.q}


@dataclass(frozen=True)
class Arm:
    """A fork arm read outward from the center: order d, and q = det of the
    arm without its first curve."""

    d: int
    q: int
    weights: tuple[int, ...]


@dataclass(frozen=True)
class Fork:
    b0: int
    arms: tuple[Arm, Arm, Arm]

    @property
    def orders(self) -> tuple[int, int, int]:
        return tuple(a.d for a in self.arms)

    @property
    def euler(self) -> Fraction:
        """e = b0 - sum q_i/d_i; positive iff the lattice is negative definite."""
        return self.b0 - sum(Fraction(a.q, a.d) for a in self.arms)

    def to_dict(self) -> dict:
        return {
            "kind": "fork",
            "b0": self.b0,
            "arms": [{"d": a.d, "q": a.q, "weights": list(a.weights)} for a in self.arms],
        }


@dataclass(frozen=True)
class NotLogTerminal:
    reason: str

    def to_dict(self) -> dict:
        return {"kind": "not-log-terminal", "reason": self.reason}


SingularityClass = Union[Rod, Fork, NotLogTerminal]


@dataclass(frozen=True)
class GroupOrder:
    m: int
    abelianization_order: int


def classify(g: DualGraph) -> SingularityClass:
    if not g.nodes:
        return NotLogTerminal("empty graph")
    if not g.is_connected():
        return NotLogTerminal("graph is disconnected")
    if any(m != 1 for _, _, m in g.edges):
        return NotLogTerminal("multiple intersection between two curves")
    if not g.is_tree():
        return NotLogTerminal("graph has a cycle")
    if any(n.weight < 2 for n in g.nodes):
        return NotLogTerminal("curve of weight < 2 in a minimal resolution")
    valences = [g.valence(i) for i in g.ids]
    top = max(valences)
    if top <= 2:
        seq = [g.weight(i) for i in g.chain_order()]
        n, q = hj_contract(seq)
        return Rod(n, q)
    if top >= 4:
        return NotLogTerminal("curve meeting four or more others")
    if valences.count(3) > 1:
        return NotLogTerminal("more than one branch curve")
    center, arm_weights = star_arms(g)
    arms = tuple(Arm(*hj_contract(a), tuple(a)) for a in arm_weights)
    fork = Fork(g.weight(center), arms)
    if not is_platonic(fork.orders):
        return NotLogTerminal(f"arm orders {sorted(fork.orders)} are not platonic")
    if fork.euler <= 0:
        return NotLogTerminal("lattice is not negative definite")
    return fork


def duval_label(c: SingularityClass) -> str | None:
    if isinstance(c, Rod):
        return f"A{c.n - 1}" if c.q == c.n - 1 else None
    if isinstance(c, Fork):
        if c.b0 != 2 or any(set(a.weights) != {2} for a in c.arms):
            return None
        d = tuple(sorted(c.orders))
        rank = 1 + sum(len(a.weights) for a in c.arms)
        if d[0] == 2 and d[1] == 2:
            return f"D{rank}"
        return f"E{rank}"
    return None


def fundamental_group_order(c: SingularityClass) -> GroupOrder:
    """Order of the local fundamental group, with |det M| alongside.

    Rods give the cyclic order n.  A fork's link is Seifert fibred over a
    sphere with three cone points of orders d_i; the orbifold base has Euler
    characteristic chi = sum 1/d_i - 1 > 0 and its fundamental group has order
    2/chi.  The pullback to the universal orbifold cover is a circle bundle
    of Euler number (2/chi) e, so the order is (2/chi)^2 e = 4 e / chi^2.
    """
    if isinstance(c, Rod):
        return GroupOrder(c.n, c.n)
    if not isinstance(c, Fork):
        raise ClassificationError("no local fundamental group for a non log terminal graph")
    e = c.euler
    chi = sum(Fraction(1, d) for d in c.orders) - 1
    if e <= 0 or chi <= 0:
        raise ClassificationError(f"fork with e = {e}, chi = {chi} is not a quotient singularity")
    m = 4 * e / chi**2
    d1, d2, d3 = c.orders
    det = d1 * d2 * d3 * e
    if m.denominator != 1 or det.denominator != 1:
        raise ClassificationError(f"non-integral group order {m} (det {det}) for {c}")
    m, det = int(m), int(det)
    if m % det:
        raise ClassificationError(f"|det M| = {det} does not divide m = {m}")
    return GroupOrder(m, det)


def graph_of(c: SingularityClass) -> DualGraph:
    """Canonical dual graph realizing a rod or fork class."""
    if isinstance(c, Rod):
        return canonical_form(DualGraph.chain(c.weights))
    if isinstance(c, Fork):
        return canonical_form(DualGraph.star(c.b0, [a.weights for a in c.arms]))
    raise ClassificationError("not log terminal")


def abelianization_order(g: DualGraph) -> int:
    return abs(determinant(build_matrix(g)))


# -- enumeration -------------------------------------------------------------------


def _canonical_rods(length: int, max_weight: int):
    for seq in itertools.product(range(2, max_weight + 1), repeat=length):
        if seq <= seq[::-1]:
            yield seq


def enumerate_log_terminal(max_nodes: int, max_weight: int) -> list[DualGraph]:
    """Canonical rods and forks within the bounds, sorted deterministically.

    Order: by node count, rods before forks, then by canonical weight data.
    """
    if max_nodes < 1 or max_weight < 1:
        raise ValueError("bounds must be >= 1")
    out: list[tuple] = []
    if max_weight < 2:
        return []
    for r in range(1, max_nodes + 1):
        for seq in _canonical_rods(r, max_weight):
            out.append((r, 0, seq, DualGraph.chain(seq)))
    # a platonic triple always contains the arm [2] (order 2) and a second arm
    # of order 2 or 3, i.e. [2], [3] or [2, 2]
    small = [a for a in ((2,), (3,), (2, 2)) if max(a) <= max_weight]
    seen = set()
    for L in range(1, max_nodes - 2):
        for third in itertools.product(range(2, max_weight + 1), repeat=L):
            for second in small:
                trio = tuple(sorted(((2,), second, third), key=lambda a: (len(a), a)))
                size = 1 + sum(len(a) for a in trio)
                if size > max_nodes or trio in seen:
                    continue
                seen.add(trio)
                dets = [hj_contract(a) for a in trio]
                if not is_platonic([d for d, _ in dets]):
                    continue
                for b0 in range(2, max_weight + 1):
                    fork = Fork(b0, tuple(Arm(d, q, a) for (d, q), a in zip(dets, trio)))
                    if fork.euler > 0:
                        out.append((size, 1, (b0, trio), DualGraph.star(b0, trio)))
    out.sort(key=lambda t: t[:3])
    return [t[3] for t in out]


# -- vectorized kernel for trees -------------------------------------------------

KIND_NOT, KIND_ROD, KIND_FORK = 0, 1, 2


def classify_tree_batch(shape: TreeShape, weights: np.ndarray) -> np.ndarray:
    """Combinatorial kind code (0 not log terminal, 1 rod, 2 fork) per row.

    Same rules as :func:`classify` restricted to one tree shape: chains are
    rods; a single valence-3 node with platonic arm orders and e > 0 is a
    fork; everything else is rejected.  Exact int64 arithmetic.
    """
    w = np.asarray(weights, dtype=np.int64)
    if w.ndim != 2 or w.shape[1] != shape.size:
        raise ValueError("weights must have shape (B, tree size)")
    valid = np.all(w >= 2, axis=1)
    val = shape.valences()
    out = np.zeros(len(w), dtype=np.int8)
    if max(val) <= 2:
        out[valid] = KIND_ROD
        return out
    if max(val) >= 4 or val.count(3) != 1:
        return out
    center = val.index(3)
    adj: dict[int, list[int]] = {i: [] for i in range(shape.size)}
    for a, b in shape.edges():
        adj[a].append(b)
        adj[b].append(a)
    d_cols, q_cols = [], []
    for first in adj[center]:
        arm = [first]
        prev = center
        while True:
            nxt = [j for j in adj[arm[-1]] if j != prev]
            if not nxt:
                break
            prev = arm[-1]
            arm.append(nxt[0])
        n = np.ones(len(w), dtype=np.int64)
        q = np.zeros(len(w), dtype=np.int64)
        for node in reversed(arm):
            n, q = w[:, node] * n - q, n
        d_cols.append(n)
        q_cols.append(q)
    d = np.stack(d_cols, axis=1)
    ds = np.sort(d, axis=1)
    platonic = (ds[:, 0] == 2) & (
        (ds[:, 1] == 2) | ((ds[:, 1] == 3) & (ds[:, 2] <= 5))
    )
    d1, d2, d3 = d_cols
    q1, q2, q3 = q_cols
    # d1 d2 d3 * e = |det|
    det = w[:, center] * d1 * d2 * d3 - q1 * d2 * d3 - q2 * d1 * d3 - q3 * d1 * d2
    out[valid & platonic & (det > 0)] = KIND_FORK
    return out
