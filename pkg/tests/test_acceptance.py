"""Acceptance criteria 1-10.

Each test carries ``@pytest.mark.acceptance(n)``; the conftest summary prints
one PASS/FAIL line per criterion at the end of the run.  Tolerances are exact
throughout and runtime limits are asserted where one is stated.
"""
import itertools
import math
import os
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from logdp.basket import Basket, Bounds, bmy_sum, cross_check_theorem, enumerate_baskets, verify_basket
from logdp.discrepancy import is_log_terminal_numeric, log_terminal_tree_batch, solve_discrepancies
from logdp.families import ParamBounds, theorem_baskets
from logdp.graph import DualGraph, TreeShape, build_matrix
from logdp.surgery import (
    SurgeryError,
    apply_op,
    blow_up_edge,
    blow_up_point,
    contract,
    fiber_a,
    fiber_b,
    fiber_c,
    fiber_class,
)
from logdp.taxonomy import (
    KIND_NOT,
    Fork,
    Rod,
    classify,
    classify_tree_batch,
    enumerate_log_terminal,
    fundamental_group_order,
    hj_contract,
    hj_expand,
)

from conftest import SEED
from oracles import (
    blow_up_matrix,
    continued_fraction,
    contract_matrix,
    det_fraction,
    gauss_solve,
    matrix_of,
    random_configuration,
    trees,
)


def a_n(n):
    return DualGraph.chain([2] * n)


def d_n(n):
    return DualGraph.star(2, [[2], [2], [2] * (n - 3)])


def e_n(n):
    return DualGraph.star(2, [[2], [2, 2], [2] * (n - 4)])


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


# -- 1 ------------------------------------------------------------------------------


@pytest.mark.acceptance(1)
def test_bmy_contradiction_table():
    table = {
        (5, 3, 3, 12): Fraction(61, 20),
        (6, 7, 3, 3): Fraction(127, 42),
        (5, 5, 3, 7): Fraction(328, 105),
        (5, 3, 7, 9): Fraction(4048, 1260),
    }
    with Timer() as t:
        for orders, want in table.items():
            got = bmy_sum(orders)
            assert got == want and got > 3
        # the first row through the verifier: [5], A2, A2, D5
        rep = verify_basket(Basket((DualGraph.chain([5]), a_n(2), a_n(2), d_n(5))))
        assert [p.m for p in rep.points] == [5, 3, 3, 12]
        assert rep.bmy_sum == Fraction(61, 20) and not rep.overall
    assert t.elapsed < 1


# -- 2 ------------------------------------------------------------------------------


@pytest.mark.acceptance(2)
def test_degree_one_du_val_baskets():
    with Timer() as t:
        for b in (Basket((a_n(2),) * 4), Basket((a_n(3), a_n(3), a_n(1), a_n(1)))):
            rep = verify_basket(b)
            assert rep.overall and rep.degree.degree == 1
        found = {
            tuple(sorted(b.labels))
            for b, _ in enumerate_baskets(Bounds(8, 2, 8), du_val_only=True)
        }
        assert ("A2", "A2", "A2", "A2") in found
        assert ("A1", "A1", "A3", "A3") in found
    assert t.elapsed < 10


# -- 3 ------------------------------------------------------------------------------


@pytest.mark.acceptance(3)
def test_fundamental_group_orders():
    cases = [(a_n(n), n + 1) for n in range(1, 21)]
    cases += [(d_n(n), 4 * (n - 2)) for n in range(4, 13)]
    cases += [(e_n(6), 24), (e_n(7), 48), (e_n(8), 120)]
    with Timer() as t:
        for g, want in cases:
            order = fundamental_group_order(classify(g))
            det = abs(det_fraction(build_matrix(g).rows))
            assert order.m == want
            assert order.abelianization_order == det and want % det == 0
    assert t.elapsed < 1


# -- 4 ------------------------------------------------------------------------------


@pytest.mark.acceptance(4)
def test_discrepancy_identities():
    for n in range(3, 10):
        assert solve_discrepancies(DualGraph.chain([n])).values == (Fraction(n - 2, n),)
    du_val = enumerate_log_terminal(8, 2)
    # A1..A8, D4..D8, E6..E8
    assert len(du_val) == 16
    for g in du_val:
        assert set(solve_discrepancies(g).values) == {0}
    # residual of M alpha + (w - 2) over every log terminal graph up to 5 nodes, weight 5
    for g in enumerate_log_terminal(5, 5):
        alpha = solve_discrepancies(g).values
        m = build_matrix(g).rows
        w = [g.weight(i) for i in build_matrix(g).ids]
        assert [sum(x * y for x, y in zip(row, alpha)) + wi - 2 for row, wi in zip(m, w)] == [0] * len(w)
        assert list(alpha) == gauss_solve(m, [2 - wi for wi in w])


# -- 5 ------------------------------------------------------------------------------


def _weight_grid(n):
    return np.array(list(itertools.product(range(2, 7), repeat=n)), dtype=np.int64)


@pytest.mark.acceptance(5)
@pytest.mark.slow
def test_classifier_equals_analytic_test():
    rng = random.Random(SEED + 50)
    checked = 0
    with Timer() as t:
        for n in range(1, 9):
            grid = _weight_grid(n)
            for edges in trees(n):
                shape, _ = TreeShape.from_edges(n, edges)
                combinatorial = classify_tree_batch(shape, grid) != KIND_NOT
                analytic = log_terminal_tree_batch(shape, grid)
                assert np.array_equal(combinatorial, analytic), (n, edges)
                # the vectorized kernels against the scalar functions: every row
                # up to 6 nodes, a seeded sample beyond
                rows = range(len(grid)) if n <= 6 else rng.sample(range(len(grid)), 300)
                for r in rows:
                    g = shape.graph(list(grid[r]))
                    c = classify(g)
                    scalar = isinstance(c, (Rod, Fork))
                    assert scalar == bool(combinatorial[r]) == is_log_terminal_numeric(g)
                checked += len(grid)
    assert checked == sum(len(list(trees(n))) * 5**n for n in range(1, 9))
    assert t.elapsed < 300


# -- 6 ------------------------------------------------------------------------------


@pytest.mark.acceptance(6)
def test_hirzebruch_jung_roundtrip():
    pairs = 0
    for n in range(2, 501):
        for q in range(1, n):
            if math.gcd(n, q) != 1:
                continue
            ws = hj_expand(n, q)
            assert min(ws) >= 2
            assert hj_contract(ws) == (n, q)
            # n/q = [w1, ..., wr] in lowest terms, so the continuant is n
            assert continued_fraction(ws) == Fraction(n, q)
            pairs += 1
            if n <= 40:
                assert abs(det_fraction(matrix_of(ws, [(i, i + 1, 1) for i in range(len(ws) - 1)]))) == n
    assert pairs == sum(1 for n in range(2, 501) for q in range(1, n) if math.gcd(n, q) == 1)


# -- 7 ------------------------------------------------------------------------------


def _fibre_numbers(g, f):
    ids = list(g.ids)
    vec = [f[i] for i in ids]
    weights = [g.weight(i) for i in ids]
    index = {nid: k for k, nid in enumerate(ids)}
    m = matrix_of(weights, [(index[a], index[b], mult) for a, b, mult in g.edges])
    square = sum(vec[i] * m[i][j] * vec[j] for i in range(len(ids)) for j in range(len(ids)))
    # adjunction on a smooth rational curve: K.C = -2 - C^2 = w - 2
    k_dot = sum(v * (w - 2) for v, w in zip(vec, weights))
    return square, k_dot


@pytest.mark.acceptance(7)
def test_fibre_identities():
    graphs = [fiber_a()] + [fiber_b(s) for s in range(1, 7)] + [fiber_c(s) for s in range(1, 7)]
    for g in graphs:
        f = fiber_class(g)
        assert all(v > 0 for v in f.multiplicities)
        assert _fibre_numbers(g, f) == (0, -2)
        assert f.self_intersection(g) == 0 and f.k_degree(g) == -2
    assert fiber_class(fiber_a()).multiplicities == (1, 2, 1)


# -- 8 ------------------------------------------------------------------------------


def _rows(g):
    return [list(r) for r in build_matrix(g).rows]


@pytest.mark.acceptance(8)
def test_surgery_oracle():
    rng = random.Random(SEED + 80)
    configs = ops = 0
    while configs < 1000:
        g = random_configuration(rng, max_nodes=8)
        configs += 1
        ones = [n.id for n in g.nodes if n.weight == 1]
        for e in ones:
            try:
                out = contract(g, e)
            except SurgeryError:
                continue
            assert _rows(out) == contract_matrix(_rows(g), g.ids.index(e))
            (step,) = apply_op(g, "contract", [e], 5)
            assert step.k_squared == 6
            ops += 1
        for nid in g.ids:
            try:
                up = blow_up_point(g, nid)
            except SurgeryError:
                continue
            assert _rows(up) == blow_up_matrix(_rows(g), [int(i == nid) for i in g.ids])
            assert contract(up, max(up.ids)) == g
            ops += 1
        for a, b, _ in g.edges:
            try:
                up = blow_up_edge(g, a, b)
            except SurgeryError:
                continue
            assert _rows(up) == blow_up_matrix(_rows(g), [int(i in (a, b)) for i in g.ids])
            assert contract(up, max(up.ids)) == g
            ops += 1
    assert ops > 3000


# -- 9 ------------------------------------------------------------------------------


@pytest.mark.acceptance(9)
@pytest.mark.slow
def test_theorem_coverage():
    pb = ParamBounds(m_max=4, k_max=5, n_max=6, s_max=5)
    with Timer() as t:
        n_baskets = sum(1 for _ in theorem_baskets(pb))
        # every basket verifies and lies in the passing set at its own bounds
        rep = cross_check_theorem(pb)
        assert rep.checked == n_baskets and rep.missing == []
        assert set(rep.by_case) == set(range(1, 8))
        # and a real enumeration finds every theorem basket within its bounds
        enum = cross_check_theorem(ParamBounds(m_max=4, k_max=5, n_max=6, s_max=5, case1_k_max=6),
                                   Bounds(6, 5, 10))
        assert enum.missing == [] and enum.found_in_enumeration > 50
    print(f"theorem baskets {n_baskets}, enumerated {enum.enumerated}, "
          f"found {enum.found_in_enumeration}")
    assert t.elapsed < 300


# -- 10 -----------------------------------------------------------------------------


FULL = os.environ.get("LOGDP_FULL") == "1"
SOUNDNESS_BOUNDS = [(6, t) for t in range(1, 9)] + [(9, t) for t in range(4, 8)] + [
    # default max weight at eight curves: about ten minutes unpruned
    pytest.param(9, 8, marks=pytest.mark.skipif(not FULL, reason="set LOGDP_FULL=1")),
]


@pytest.mark.acceptance(10)
@pytest.mark.parametrize("weight, total", SOUNDNESS_BOUNDS)
def test_pruning_soundness(weight, total):
    b = Bounds(8, weight, total)
    pruned = [x.key() for x, _ in enumerate_baskets(b)]
    full = [x.key() for x, _ in enumerate_baskets(b, pruned=False)]
    assert pruned == full
    if total == 8:
        assert len(pruned) > 1000
