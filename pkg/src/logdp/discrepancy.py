"""Discrepancy coefficients of the pulled-back canonical class.

For an exceptional configuration with intersection matrix M and weights w the
coefficients alpha solve  M alpha = -(w - 2),  i.e. (K + sum alpha_i D_i) . D_j = 0
for every curve.  Everything is computed in exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .graph import (
    DualGraph,
    TreeShape,
    adjunction_degree,
    build_matrix,
    connected_components,
    is_negative_definite,
)


class NotContractibleError(ValueError):
    """The configuration's lattice is not negative definite."""


class NotLogTerminalError(ValueError):
    pass


def frac_str(x: Fraction) -> str:
    """Reduced "p/q" (or plain "p" for integers); never a decimal."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class DiscrepancyVector:
    ids: tuple[int, ...]
    values: tuple[Fraction, ...]

    def __getitem__(self, node_id: int) -> Fraction:
        return self.values[self.ids.index(node_id)]

    def __len__(self) -> int:
        return len(self.values)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(zip(self.ids, self.values))

    def to_strings(self) -> list[str]:
        return [frac_str(v) for v in self.values]


@dataclass(frozen=True)
class DegreeReport:
    num_components: int
    k_squared: int
    degree: Fraction

    @property
    def positive(self) -> bool:
        return self.degree > 0


def solve_discrepancies(g: DualGraph) -> DiscrepancyVector:
    if not g.nodes:
        return DiscrepancyVector((), ())
    m = build_matrix(g)
    if not is_negative_definite(m):
        raise NotContractibleError("intersection matrix is not negative definite")
    rhs = [-k for k in adjunction_degree(g)]
    num, det = linalg.solve_integer(m.rows, rhs)
    if linalg.mat_vec(m.rows, num) != [det * v for v in rhs]:
        raise AssertionError("discrepancy solve left a nonzero residual")
    return DiscrepancyVector(g.ids, tuple(Fraction(x, det) for x in num))


def is_log_terminal_numeric(g: DualGraph) -> bool:
    """Negative definite with every discrepancy below 1.

    Only minimal-resolution graphs qualify: connected, nonempty, weights >= 2.
    """
    if not g.nodes or not g.is_connected():
        return False
    if any(n.weight < 2 for n in g.nodes):
        return False
    try:
        alphas = solve_discrepancies(g)
    except NotContractibleError:
        return False
    return all(a < 1 for a in alphas.values)


def degree_contribution(g: DualGraph) -> Fraction:
    """sum alpha_i (w_i - 2) = K . D#, for one exceptional configuration."""
    alphas = solve_discrepancies(g)
    return sum((a * k for a, k in zip(alphas.values, adjunction_degree(g))), Fraction(0))


def surface_degree(basket: Iterable[DualGraph]) -> DegreeReport:
    """(K + D#)^2 on the minimal resolution of a Picard-rank-one surface.

    With rho = 1 the resolution has K^2 = 9 - #D, and since (K + D#) is
    orthogonal to every D_i the square equals K^2 + K . D#.
    """
    count = 0
    total = Fraction(0)
    for graph in basket:
        for comp in connected_components(graph):
            if not is_log_terminal_numeric(comp):
                raise NotLogTerminalError(f"component {comp.weights} is not log terminal")
            count += len(comp)
            total += degree_contribution(comp)
    k2 = 9 - count
    return DegreeReport(count, k2, k2 + total)


def pairing_with_k(
    g: DualGraph,
    alphas: DiscrepancyVector,
    coefficients: Mapping[int, int] | Iterable[int],
) -> Fraction:
    """sum c_i alpha_i over the given node ids (bare ids get coefficient 1)."""
    if not isinstance(coefficients, Mapping):
        coefficients = {i: 1 for i in coefficients}
    known = set(g.ids)
    out = Fraction(0)
    for nid, c in coefficients.items():
        if nid not in known:
            raise KeyError(f"unknown node id {nid}")
        out += c * alphas[nid]
    return out


# -- vectorized kernel for trees -------------------------------------------------


def _kernel_dtype(weights: np.ndarray, n: int):
    top = int(np.abs(weights).max(initial=2)) + 2
    # crude bound on |N_c * D_root|; beyond it fall back to Python ints
    return np.int64 if (n + 1) * top ** (2 * n + 2) < 2**62 else object


def log_terminal_tree_batch(shape: TreeShape, weights: np.ndarray) -> np.ndarray:
    """Analytic log-terminality test for many weightings of one tree.

    ``weights`` has shape (B, n) in the node order of ``shape``.  With
    A = -M one has A (1 - alpha) = 2 - valence, so the test is: every leaves-
    first elimination pivot is positive (A positive definite) and the exact
    solution of that system is positive.  Elimination runs on integer
    numerators: D[v] is the determinant of the subtree under v, P[v] the
    product of its children's D, N[v] the eliminated right-hand side scaled
    by P[v].
    """
    w = np.asarray(weights)
    if w.ndim != 2 or w.shape[1] != shape.size:
        raise ValueError("weights must have shape (B, tree size)")
    n = shape.size
    dtype = _kernel_dtype(w, n)
    w = w.astype(dtype)
    b = [2 - v for v in shape.valences()]
    kids = shape.children()
    D = [None] * n
    P = [None] * n
    N = [None] * n
    ok = np.all(w >= 2, axis=1)
    for v in range(n - 1, -1, -1):
        x = w[:, v].copy()
        num = np.full(len(w), b[v], dtype=dtype)
        y = np.ones(len(w), dtype=dtype)
        for c in kids[v]:
            x = x * D[c] - P[c] * y
            num = num * D[c] + N[c] * y
            y = y * D[c]
        D[v], N[v], P[v] = x, num, y
        ok &= (x > 0).astype(bool)
    # back substitution, scaled by det A = D[0]:  Z_v = (1 - alpha_v) * det A
    Z = [None] * n
    Z[0] = N[0]
    ok &= (Z[0] > 0).astype(bool)
    for v in range(1, n):
        p = shape.parent[v]
        safe = np.where((D[v] > 0).astype(bool), D[v], 1)
        Z[v] = (N[v] * D[0] + Z[p] * P[v]) // safe
        ok &= (Z[v] > 0).astype(bool)
    return ok
