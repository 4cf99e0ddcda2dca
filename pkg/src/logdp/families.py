"""Parametric rods R_{ks} and the seven four-point theorem baskets.

R_{ks} = L, s, R.  With s = 1 the middle curve is a (-1)-curve and the whole
chain is a degenerate conic-bundle fibre: it contracts to a single 0-curve.
That property pins down the block layout for every k, and the odd-k and
k = 1 layouts here are chosen so it holds.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .basket import Basket
from .graph import DualGraph


class FamilyParameterError(ValueError):
    pass


@dataclass(frozen=True)
class RksParams:
    k: int
    m: tuple[int, ...]
    s: int = 1

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))
        if self.k < 1:
            raise FamilyParameterError(f"k must be >= 1, got {self.k}")
        if len(self.m) != self.k:
            raise FamilyParameterError(f"need {self.k} values m_i, got {len(self.m)}")
        if any(x < 2 for x in self.m):
            raise FamilyParameterError(f"every m_i must be >= 2, got {self.m}")
        if self.s < 1:
            raise FamilyParameterError(f"s must be >= 1, got {self.s}")

    @classmethod
    def of(cls, m: Sequence[int], s: int = 1) -> "RksParams":
        return cls(len(m), tuple(m), s)

    def tag(self) -> str:
        return f"k{self.k}-m{'-'.join(map(str, self.m))}-s{self.s}"


def _twos(n: int) -> list[int]:
    return [2] * n


def _left_item(m: int, i: int) -> list[int]:
    # 1-based index i >= 2; even items are blocks of twos
    return _twos(m - 1) if i % 2 == 0 else [m + 2]


def _right_item(m: int, i: int) -> list[int]:
    return [m + 2] if i % 2 == 0 else _twos(m - 1)


def rks_halves(m: Sequence[int]) -> tuple[list[int], list[int]]:
    """The parts left and right of the inserted entry s."""
    m = list(m)
    k = len(m)
    if k == 0:
        raise FamilyParameterError("empty parameter list")
    if k == 1:
        return [m[0]], _twos(m[0] - 1)
    left = [m[0]]
    if k % 2 == 0:
        for i in range(2, k + 1):
            left += _left_item(m[i - 1], i)
        right = [m[k - 1] + 1]
    else:
        for i in range(2, k):
            left += _left_item(m[i - 1], i)
        left.append(m[k - 1] + 1)
        right = _twos(m[k - 1] - 1)
    for i in range(k - 1, 1, -1):
        right += _right_item(m[i - 1], i)
    right += _twos(m[0] - 2)
    return left, right


def rks_sequence(p: RksParams) -> list[int]:
    left, right = rks_halves(p.m)
    return left + [p.s] + right


def junction_rod(m: Sequence[int], c: int) -> list[int]:
    """L + R glued directly, with the curve at the junction made c - 1 heavier.

    Even k: the raised curve is R's first entry m_k + 1.  Odd k >= 3: it is
    L's last entry m_k + 1.  k = 1: it is the single curve m_1.
    """
    left, right = rks_halves(m)
    k = len(m)
    if k % 2 == 0:
        right[0] += c - 1
    else:
        left[-1] += c - 1
    return left + right


# -- building blocks ------------------------------------------------------------------


def a_n(n: int) -> DualGraph:
    if n < 1:
        raise FamilyParameterError(f"A_n needs n >= 1, got {n}")
    return DualGraph.chain([2] * n)


def d_n(n: int) -> DualGraph:
    """D_n for n >= 4; D_3 is read as A_3."""
    if n < 3:
        raise FamilyParameterError(f"D_n needs n >= 3, got {n}")
    if n == 3:
        return a_n(3)
    return DualGraph.star(2, [[2], [2], [2] * (n - 3)])


def _fork_or_chain(center: int, tail: Sequence[int]) -> DualGraph:
    """Two (-2)-curves and ``tail`` hung on a curve of weight ``center``."""
    if not tail:
        return DualGraph.chain([2, center, 2])
    return DualGraph.star(center, [[2], [2], list(tail)])


def _chain_label(weights: Sequence[int]) -> str:
    if set(weights) == {2}:
        return f"A{len(weights)}"
    return "rod(" + ",".join(map(str, weights)) + ")"


# -- theorem cases ---------------------------------------------------------------------


def case1(k: int) -> Basket:
    """2A1 + P + Q, P with k curves and Q's center of weight k - 1."""
    if k < 4:
        raise FamilyParameterError(f"case 1 needs k >= 4, got {k}")
    p = DualGraph.star(2, [[2], [2], [2] * (k - 4) + [3]])
    q = DualGraph.star(k - 1, [[2, 2], [2], [3]])
    return Basket((a_n(1), a_n(1), p, q), ("A1", "A1", f"case1-P(k={k})", f"case1-Q(k={k})"))


def case2(m: Sequence[int]) -> Basket:
    """2A1 + P + Q from the fibre R_{k1} = L, 1, R with its (-1)-curve removed.

    Two (-2)-curves hang on the outer end of each half.
    """
    p = RksParams.of(m)
    left, right = rks_halves(p.m)
    gp = _fork_or_chain(left[0], left[1:])
    rr = right[::-1]
    gq = _fork_or_chain(rr[0], rr[1:])
    return Basket(
        (a_n(1), a_n(1), gp, gq),
        ("A1", "A1", f"case2-P({p.tag()})", f"case2-Q({p.tag()})"),
    )


# Fibres through the central curve for case 3, as weight chains containing one
# (-1)-curve.  F2 is drawn left of the center (its right end touches it), F3 to
# the right (its left end touches it).
CASE3_F2 = ((3, 1, 2, 2), (2, 2, 1, 3))
CASE3_F3 = (
    (3, 1, 2, 2),
    (2, 2, 1, 3),
    (4, 1, 2, 2, 2),
    (2, 2, 2, 1, 4),
    (5, 1, 2, 2, 2, 2),
    (2, 2, 2, 2, 1, 5),
    (3, 2, 1, 3, 2),
    (2, 3, 1, 2, 3),
)
CASE3_S_VALUES = (1, 3, 4, 5)


def _split_fibre(chain: Sequence[int], attach_left: bool) -> tuple[list[int], list[int]]:
    """(arm read outward from the center, the other side of the (-1)-curve)."""
    chain = list(chain)
    if not attach_left:
        chain.reverse()
    cut = chain.index(1)
    return chain[:cut], chain[cut + 1 :]


def _case3_basket(n: int, f2_arm, q2, f3_arm, q3, tag) -> Basket:
    if n < 2:
        raise FamilyParameterError(f"case 3 needs a center weight n >= 2, got {n}")
    p = DualGraph.star(n, [[2], list(f2_arm), list(f3_arm)])
    comps = (p, a_n(1), DualGraph.chain(q2), DualGraph.chain(q3))
    labels = (f"case3-P(n={n},{tag})", "A1", _chain_label(q2), _chain_label(q3))
    return Basket(comps, labels)


def case3_table(n: int, f2: int, f3: int) -> Basket:
    """Case 3 with F2 and F3 taken from the fixed tables (0-based indices)."""
    if not 0 <= f2 < len(CASE3_F2):
        raise FamilyParameterError(f"F2 variant index {f2} out of range")
    if not 0 <= f3 < len(CASE3_F3):
        raise FamilyParameterError(f"F3 variant index {f3} out of range")
    arm2, q2 = _split_fibre(CASE3_F2[f2], attach_left=False)
    arm3, q3 = _split_fibre(CASE3_F3[f3], attach_left=True)
    return _case3_basket(n, arm2, q2, arm3, q3, f"F2#{f2},F3#{f3}")


def case3_rks(n: int, m: Sequence[int], s: int) -> Basket:
    """Case 3 with F2 = (2,1,2) and F3 built on R_{ks}."""
    arm3, q3, tag = _case3_f3_rks(m, s)
    return _case3_basket(n, [2], [2], arm3, q3, tag)


def case4(n: int, m: Sequence[int]) -> Basket:
    """2A1 + D_n + the rod R, n + 1, L (R_{k1} closed up at its (-1)-curve)."""
    p = RksParams.of(m)
    left, right = rks_halves(p.m)
    rod = right + [n + 1] + left
    return Basket(
        (a_n(1), a_n(1), d_n(n), DualGraph.chain(rod)),
        ("A1", "A1", "A3" if n == 3 else f"D{n}", f"case4-rod(n={n},{p.tag()})"),
    )


_JUNCTION = {5: (1, (2, 2, 2), "3A2"), 6: (2, (3, 3, 1), "2A3+A1"), 7: (3, (1, 2, 5), "A1+A2+A5")}


def junction_case(case_id: int, m: Sequence[int]) -> Basket:
    """Cases 5, 6, 7: three A_n points plus a rod."""
    c, sizes, _ = _JUNCTION[case_id]
    p = RksParams.of(m)
    comps = tuple(a_n(x) for x in sizes) + (DualGraph.chain(junction_rod(p.m, c)),)
    labels = tuple(f"A{x}" for x in sizes) + (f"case{case_id}-rod({p.tag()})",)
    return Basket(comps, labels)


def theorem_case(case_id: int, **params) -> Basket:
    """Basket for one theorem case.

    Parameters: case 1 ``k``; case 2 ``m``; case 3 ``n`` plus either
    ``f2``/``f3`` table indices or ``m``/``s``; case 4 ``n``, ``m``;
    cases 5-7 ``m``.
    """
    try:
        if case_id == 1:
            return case1(params["k"])
        if case_id == 2:
            return case2(params["m"])
        if case_id == 3:
            if "f2" in params:
                return case3_table(params["n"], params["f2"], params["f3"])
            return case3_rks(params["n"], params["m"], params["s"])
        if case_id == 4:
            return case4(params["n"], params["m"])
        if case_id in _JUNCTION:
            return junction_case(case_id, params["m"])
    except KeyError as exc:
        raise FamilyParameterError(f"case {case_id} is missing parameter {exc}") from exc
    raise FamilyParameterError(f"no theorem case {case_id}")


def _case3_f3_rks(m: Sequence[int], s: int) -> tuple[list[int], list[int], str]:
    p = RksParams.of(m, s)
    left, right = rks_halves(p.m)
    if s == 1:
        return left, right, f"F3=R({p.tag()})"
    if s >= 3:
        return left + [s] + right, [2] * (s - 2), f"F3=R({p.tag()})"
    raise FamilyParameterError("case 3 uses s = 1 or s >= 3")


def case3_variants(n_values: Sequence[int] = range(2, 7), m_max: int = 4, k_max: int = 5,
                   s_values: Sequence[int] = CASE3_S_VALUES, paired: bool = False) -> list[Basket]:
    """Case 3 baskets over the F2 and F3 tables.

    By default every F2 row (the two table rows and 2,1,2) meets every F3 row
    (the table rows and the R_ks family); many of these fail verification and
    are meant to be filtered.  ``paired=True`` keeps only the pairings of
    :func:`theorem_baskets`: table with table, 2,1,2 with R_ks.
    """
    f2_rows = [(*_split_fibre(row, attach_left=False), f"F2#{i}") for i, row in enumerate(CASE3_F2)]
    f3_table = [(*_split_fibre(row, attach_left=True), f"F3#{i}") for i, row in enumerate(CASE3_F3)]
    f3_rks = [_case3_f3_rks(m, s) for m in m_tuples(m_max, k_max) for s in s_values]
    out = []
    for n in n_values:
        for arm2, q2, t2 in f2_rows + [([2], [2], "F2=2,1,2")]:
            for arm3, q3, t3 in f3_table + f3_rks:
                if paired and (t2 == "F2=2,1,2") != t3.startswith("F3=R"):
                    continue
                out.append(_case3_basket(n, arm2, q2, arm3, q3, f"{t2},{t3}"))
    return out


# -- parameter sweeps --------------------------------------------------------------


@dataclass(frozen=True)
class ParamBounds:
    m_max: int = 4
    k_max: int = 5
    n_max: int = 6
    s_max: int = 5
    case1_k_max: int = 10


def m_tuples(m_max: int, k_max: int) -> Iterator[tuple[int, ...]]:
    for k in range(1, k_max + 1):
        yield from itertools.product(range(2, m_max + 1), repeat=k)


def theorem_baskets(b: ParamBounds = ParamBounds()) -> Iterator[tuple[int, dict, Basket]]:
    """Every theorem-case basket within the parameter bounds, with its params."""
    for k in range(4, b.case1_k_max + 1):
        yield 1, {"k": k}, case1(k)
    ms = list(m_tuples(b.m_max, b.k_max))
    for m in ms:
        yield 2, {"m": m}, case2(m)
    s_values = [s for s in CASE3_S_VALUES if s <= b.s_max]
    for n in range(2, b.n_max + 1):
        for f2 in range(len(CASE3_F2)):
            for f3 in range(len(CASE3_F3)):
                yield 3, {"n": n, "f2": f2, "f3": f3}, case3_table(n, f2, f3)
        for m in ms:
            for s in s_values:
                yield 3, {"n": n, "m": m, "s": s}, case3_rks(n, m, s)
    for n in range(3, b.n_max + 1):
        for m in ms:
            yield 4, {"n": n, "m": m}, case4(n, m)
    for case_id in (5, 6, 7):
        for m in ms:
            yield case_id, {"m": m}, junction_case(case_id, m)
