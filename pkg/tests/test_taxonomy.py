import itertools
from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from logdp.discrepancy import is_log_terminal_numeric
from logdp.graph import DualGraph, TreeShape, build_matrix, canonical_key, determinant
from logdp.taxonomy import (
    KIND_FORK,
    KIND_NOT,
    KIND_ROD,
    ClassificationError,
    Fork,
    NotLogTerminal,
    Rod,
    classify,
    classify_tree_batch,
    duval_label,
    enumerate_log_terminal,
    fundamental_group_order,
    graph_of,
    hj_contract,
    hj_expand,
    is_platonic,
)

from oracles import continued_fraction, trees


def d_n(n):
    return DualGraph.star(2, [[2], [2], [2] * (n - 3)])


E6 = DualGraph.star(2, [[2], [2, 2], [2, 2]])
E7 = DualGraph.star(2, [[2], [2, 2], [2, 2, 2]])
E8 = DualGraph.star(2, [[2], [2, 2], [2, 2, 2, 2]])


def test_hj_examples():
    assert hj_expand(2, 1) == [2]
    assert hj_expand(5, 3) == [2, 3]
    assert hj_expand(7, 6) == [2] * 6
    assert hj_contract([3]) == (3, 1)
    assert hj_contract([2, 3]) == (5, 3)
    assert hj_contract([2, 2, 2]) == (4, 3)
    for bad in ((3, 3), (4, 2), (5, 0)):
        with pytest.raises(ValueError):
            hj_expand(*bad)
    with pytest.raises(ValueError):
        hj_contract([2, 1])
    with pytest.raises(ValueError):
        hj_contract([])


@given(st.lists(st.integers(2, 9), min_size=1, max_size=8))
def test_hj_contract_matches_continued_fraction(weights):
    n, q = hj_contract(weights)
    assert Fraction(n, q) == continued_fraction(weights)
    assert gcd(n, q) == 1
    assert hj_expand(n, q) == list(weights)
    assert abs(determinant(build_matrix(DualGraph.chain(weights)))) == n


def test_fork_euler_bounded_below_by_orbifold_euler():
    # heaviest arms of each order give the smallest e, and it equals chi
    worst = DualGraph.star(2, [[2], [2, 2], [2, 2, 2, 2]])
    f = classify(worst)
    assert f.euler == Fraction(1, 30) == sum(Fraction(1, d) for d in f.orders) - 1


def test_platonic():
    assert is_platonic((2, 2, 17))
    assert is_platonic((5, 3, 2))
    assert not is_platonic((2, 3, 6))
    assert not is_platonic((3, 3, 3))
    assert not is_platonic((2, 2))


def test_classify_examples():
    assert classify(DualGraph.chain([2, 2])) == Rod(3, 2)
    f = classify(d_n(6))
    assert isinstance(f, Fork) and duval_label(f) == "D6"
    assert isinstance(classify(DualGraph.star(2, [[2], [2], [2], [2]])), NotLogTerminal)
    # two branch curves
    g = DualGraph.star(2, [[2], [2], [2, 2, 2]])
    from logdp.graph import CurveNode

    h = DualGraph(g.nodes + (CurveNode(9, 2), CurveNode(10, 2)), g.edges + ((5, 9, 1), (4, 10, 1)))
    assert "branch" in classify(h).reason
    # arms (2, 3, 6) are not platonic
    assert "platonic" in classify(DualGraph.star(2, [[2], [2, 2], [2] * 5])).reason
    assert "weight < 2" in classify(DualGraph.star(1, [[2], [2], [2]])).reason
    assert isinstance(classify(DualGraph(())), NotLogTerminal)


def test_duval_labels():
    assert duval_label(Rod(4, 3)) == "A3"
    assert duval_label(Rod(5, 3)) is None
    assert duval_label(classify(E8)) == "E8"
    assert duval_label(classify(E6)) == "E6"
    assert duval_label(classify(DualGraph.star(3, [[2], [2], [2]]))) is None
    assert duval_label(NotLogTerminal("x")) is None


def test_group_orders_classical():
    for n in range(1, 21):
        o = fundamental_group_order(classify(DualGraph.chain([2] * n)))
        assert o.m == n + 1
    for n in range(4, 13):
        o = fundamental_group_order(classify(d_n(n)))
        assert o.m == 4 * (n - 2)
        assert o.m % o.abelianization_order == 0
    assert [fundamental_group_order(classify(g)).m for g in (E6, E7, E8)] == [24, 48, 120]
    assert fundamental_group_order(classify(E8)).abelianization_order == 1


def test_rod_order_is_n():
    assert fundamental_group_order(Rod(7, 3)).m == 7


def _coset_order(b0, arms):
    """Order of the link group from its Seifert presentation, by coset enumeration."""
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    F, x1, x2, x3, h = free_group("x1 x2 x3 h")
    rels = []
    for x, arm in zip((x1, x2, x3), arms):
        d, q = hj_contract(arm)
        rels += [x * h * x**-1 * h**-1, x**d * h ** (-q)]
    rels.append(x1 * x2 * x3 * h ** (-b0))
    return FpGroup(F, rels).order()


@pytest.mark.parametrize(
    "b0, arms",
    [
        (2, [[2], [2], [2]]),
        (2, [[2], [2], [2, 2]]),
        (2, [[2], [2, 2], [2, 2]]),
        (3, [[2], [2], [2]]),
        (3, [[2], [3], [2]]),
        (2, [[2], [2], [3]]),
    ],
)
def test_fork_order_matches_coset_enumeration(b0, arms):
    c = classify(DualGraph.star(b0, arms))
    assert fundamental_group_order(c).m == _coset_order(b0, arms)


def test_fork_order_beyond_du_val():
    # three (-2)-arms on a (-3)-curve: e = 3/2, chi = 1/2
    o = fundamental_group_order(classify(DualGraph.star(3, [[2], [2], [2]])))
    assert (o.m, o.abelianization_order) == (24, 12)


def test_group_order_errors():
    with pytest.raises(ClassificationError):
        fundamental_group_order(NotLogTerminal("no"))


def test_det_divides_order_for_all_small_forks():
    for g in enumerate_log_terminal(6, 5):
        c = classify(g)
        o = fundamental_group_order(c)
        assert o.abelianization_order == abs(determinant(build_matrix(g)))
        assert o.m % o.abelianization_order == 0


def test_graph_of_roundtrip():
    for g in enumerate_log_terminal(5, 4):
        assert canonical_key(graph_of(classify(g))) == canonical_key(g)
    with pytest.raises(ClassificationError):
        graph_of(NotLogTerminal("x"))


def test_enumerate_examples():
    assert [g.weights for g in enumerate_log_terminal(1, 3)] == [(2,), (3,)]
    assert [g.weights for g in enumerate_log_terminal(2, 2)] == [(2,), (2, 2)]
    with pytest.raises(ValueError):
        enumerate_log_terminal(0, 3)


def _brute_force_keys(max_nodes, max_weight):
    keys = set()
    for n in range(1, max_nodes + 1):
        for edges in trees(n):
            shape, order = TreeShape.from_edges(n, edges)
            for ws in itertools.product(range(2, max_weight + 1), repeat=n):
                g = shape.graph(ws)
                if is_log_terminal_numeric(g):
                    keys.add(canonical_key(g))
    return keys


@pytest.mark.parametrize("max_nodes, max_weight", [(4, 4), (5, 3), (6, 3)])
def test_enumerate_matches_brute_force(max_nodes, max_weight):
    got = [canonical_key(g) for g in enumerate_log_terminal(max_nodes, max_weight)]
    assert len(got) == len(set(got))
    assert set(got) == _brute_force_keys(max_nodes, max_weight)


def test_enumerate_count_4_4():
    # frozen from the brute-force oracle above
    assert len(enumerate_log_terminal(4, 4)) == 87


def test_batch_classifier_codes():
    shape, _ = TreeShape.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    w = np.array([[2, 2, 2, 2], [1, 2, 2, 2], [2, 3, 3, 3]])
    codes = classify_tree_batch(shape, w)
    assert list(codes) == [KIND_FORK, KIND_NOT, KIND_NOT]
    chain = TreeShape((-1, 0, 1))
    assert list(classify_tree_batch(chain, np.array([[2, 5, 2]]))) == [KIND_ROD]
