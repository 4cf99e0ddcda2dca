"""Four-point baskets: necessary-condition verification and bounded enumeration.

A basket passes when every point is log terminal, the orbifold
Bogomolov-Miyaoka-Yau sum  sum (m_P - 1)/m_P  is at most 3, and the degree
(K + D#)^2 = 9 - #D + K.D# of a Picard-rank-one surface is positive.  These
are necessary conditions only; a passing basket is a *candidate*.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .discrepancy import DegreeReport, degree_contribution, frac_str, solve_discrepancies
from .graph import (
    DualGraph,
    MalformedGraphError,
    canonical_form,
    canonical_key,
    validate_singularity_graph,
)
from .taxonomy import (
    Fork,
    Rod,
    SingularityClass,
    classify,
    duval_label,
    enumerate_log_terminal,
    fundamental_group_order,
)

BMY_BOUND = 3


@dataclass(frozen=True)
class Basket:
    components: tuple[DualGraph, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "labels", tuple(self.labels))

    def __len__(self) -> int:
        return len(self.components)

    @property
    def total_nodes(self) -> int:
        return sum(len(g) for g in self.components)

    def key(self) -> tuple:
        """Isomorphism-invariant sort key of the multiset of components."""
        return tuple(sorted((len(g), canonical_key(g)) for g in self.components))

    def canonical(self) -> "Basket":
        pairs = sorted(
            zip(self.components, self.labels or [""] * len(self.components)),
            key=lambda p: (len(p[0]), canonical_key(p[0])),
        )
        comps = tuple(canonical_form(g) for g, _ in pairs)
        labels = tuple(lbl for _, lbl in pairs) if self.labels else ()
        return Basket(comps, labels)

    def to_dict(self) -> dict:
        out = {"components": [g.to_dict() for g in self.components]}
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data) -> "Basket":
        try:
            comps = tuple(DualGraph.from_dict(c) for c in data["components"])
        except (KeyError, TypeError) as exc:
            raise MalformedGraphError(f"basket JSON does not match schema: {exc}") from exc
        return cls(comps, tuple(data.get("labels", ())))

    @classmethod
    def from_json(cls, text: str) -> "Basket":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedGraphError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


# -- per-point invariants ------------------------------------------------------------


@dataclass(frozen=True)
class PointReport:
    kind: SingularityClass
    label: str | None
    nodes: int
    m: int | None
    abelianization_order: int | None
    alphas: tuple[Fraction, ...]
    k_dot_d: Fraction | None

    @property
    def log_terminal(self) -> bool:
        return isinstance(self.kind, (Rod, Fork))

    @property
    def bmy_term(self) -> Fraction:
        return Fraction(self.m - 1, self.m)

    @property
    def degree_delta(self) -> Fraction:
        """Change in (K + D#)^2 caused by this point: K.D# - #nodes."""
        return self.k_dot_d - self.nodes

    def to_dict(self) -> dict:
        return {
            "class": self.kind.to_dict(),
            "label": self.label,
            "nodes": self.nodes,
            "m": self.m,
            "abelianization_order": self.abelianization_order,
            "alpha": [frac_str(a) for a in self.alphas],
            "alpha_max": frac_str(max(self.alphas)) if self.alphas else None,
            "k_dot_dsharp": None if self.k_dot_d is None else frac_str(self.k_dot_d),
        }


@lru_cache(maxsize=None)
def _point_report_canonical(g: DualGraph) -> PointReport:
    kind = classify(g)
    if not isinstance(kind, (Rod, Fork)):
        return PointReport(kind, None, len(g), None, None, (), None)
    order = fundamental_group_order(kind)
    alphas = solve_discrepancies(g)
    return PointReport(
        kind,
        duval_label(kind),
        len(g),
        order.m,
        order.abelianization_order,
        alphas.values,
        degree_contribution(g),
    )


def point_report(g: DualGraph) -> PointReport:
    """Invariants of one singular point; alphas follow the canonical numbering."""
    return _point_report_canonical(canonical_form(g))


# -- verification ------------------------------------------------------------------


def bmy_sum(orders: Iterable[int]) -> Fraction:
    total = Fraction(0)
    for m in orders:
        if m < 1:
            raise ValueError(f"local fundamental group order must be >= 1, got {m}")
        total += Fraction(m - 1, m)
    return total


@dataclass(frozen=True)
class VerificationReport:
    points: tuple[PointReport, ...]
    bmy_sum: Fraction | None
    degree: DegreeReport | None
    failures: tuple[str, ...] = field(default=())

    @property
    def all_log_terminal(self) -> bool:
        return all(p.log_terminal for p in self.points)

    @property
    def bmy_pass(self) -> bool:
        return self.bmy_sum is not None and self.bmy_sum <= BMY_BOUND

    @property
    def degree_pass(self) -> bool:
        return self.degree is not None and self.degree.positive

    @property
    def overall(self) -> bool:
        return self.all_log_terminal and self.bmy_pass and self.degree_pass

    def to_dict(self) -> dict:
        return {
            "status": "candidate" if self.overall else "rejected",
            "overall": self.overall,
            "points": [p.to_dict() for p in self.points],
            "m": [p.m for p in self.points],
            "bmySum": None if self.bmy_sum is None else frac_str(self.bmy_sum),
            "bmyPass": self.bmy_pass,
            "numComponents": None if self.degree is None else self.degree.num_components,
            "kSquared": None if self.degree is None else self.degree.k_squared,
            "degree": None if self.degree is None else frac_str(self.degree.degree),
            "degreePass": self.degree_pass,
            "failures": list(self.failures),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"), sort_keys=True)


def _report_from_points(points: Sequence[PointReport]) -> VerificationReport:
    failures = []
    for i, p in enumerate(points):
        if not p.log_terminal:
            failures.append(f"point {i}: not log terminal ({p.kind.reason})")
    if failures:
        return VerificationReport(tuple(points), None, None, tuple(failures))
    total = bmy_sum(p.m for p in points)
    if total > BMY_BOUND:
        failures.append(
            f"BMY: sum (m-1)/m = {frac_str(total)} > {BMY_BOUND} for m = {[p.m for p in points]}"
        )
    count = sum(p.nodes for p in points)
    k2 = 9 - count
    degree = DegreeReport(count, k2, k2 + sum(p.k_dot_d for p in points))
    if not degree.positive:
        failures.append(f"degree: (K+D#)^2 = {frac_str(degree.degree)} <= 0 with #D = {count}")
    return VerificationReport(tuple(points), total, degree, tuple(failures))


def verify_basket(b: Basket) -> VerificationReport:
    if len(b) != 4:
        raise ValueError(f"a basket must have exactly four points, got {len(b)}")
    for g in b.components:
        validate_singularity_graph(g)
    return _report_from_points([point_report(g) for g in b.components])


# -- enumeration ----------------------------------------------------------------------


@dataclass(frozen=True)
class Bounds:
    max_nodes_per_point: int = 8
    max_weight: int = 9
    max_total_nodes: int = 14

    def __post_init__(self):
        if min(self.max_nodes_per_point, self.max_weight, self.max_total_nodes) < 1:
            raise ValueError("bounds must be >= 1")


@lru_cache(maxsize=32)
def _pool(max_nodes: int, max_weight: int, du_val_only: bool) -> tuple:
    graphs = enumerate_log_terminal(max_nodes, max_weight)
    pool = []
    for g in graphs:
        rep = point_report(g)
        if du_val_only and rep.label is None:
            continue
        pool.append((g, rep))
    return tuple(pool)


def component_pool(bounds: Bounds, du_val_only: bool = False) -> list[tuple[DualGraph, PointReport]]:
    per_point = min(bounds.max_nodes_per_point, bounds.max_total_nodes - 3)
    if per_point < 1:
        return []
    return list(_pool(per_point, bounds.max_weight, du_val_only))


def _search(pool, start_range, max_total, pruned, include_failing):
    """Nested loops over index-nondecreasing 4-tuples from ``pool``.

    ``pool`` is sorted by node count, so the node budget is a hard break.
    With ``pruned`` the BMY and degree conditions also cut branches, using
    the smallest BMY term and largest degree change left in the pool suffix.
    """
    n = len(pool)
    nodes = [rep.nodes for _, rep in pool]
    terms = [rep.bmy_term for _, rep in pool]
    deltas = [rep.degree_delta for _, rep in pool]
    suf_min_term = [Fraction(1)] * (n + 1)
    suf_max_delta = [Fraction(-10**9)] * (n + 1)
    for i in range(n - 1, -1, -1):
        suf_min_term[i] = min(terms[i], suf_min_term[i + 1])
        suf_max_delta[i] = max(deltas[i], suf_max_delta[i + 1])

    found = []

    def rec(start, chosen, used_nodes, bmy, delta):
        slots = 4 - len(chosen)
        if slots == 0:
            report = _report_from_points([pool[i][1] for i in chosen])
            if report.overall or include_failing:
                found.append((tuple(chosen), report))
            return
        rng = range(start, n) if chosen else start_range
        for i in rng:
            if used_nodes + slots * nodes[i] > max_total:
                break
            nb = bmy + terms[i]
            nd = delta + deltas[i]
            if pruned and not include_failing:
                rest = slots - 1
                if nb + rest * suf_min_term[i] > BMY_BOUND:
                    # terms are not sorted, so only this candidate is skipped
                    continue
                if 9 + nd + rest * suf_max_delta[i] <= 0:
                    continue
            rec(i, chosen + [i], used_nodes + nodes[i], nb, nd)

    rec(0, [], 0, Fraction(0), Fraction(0))
    return found


def enumerate_baskets(
    bounds: Bounds = Bounds(),
    *,
    du_val_only: bool = False,
    pruned: bool = True,
    include_failing: bool = False,
    threads: int = 1,
) -> list[tuple[Basket, VerificationReport]]:
    """All canonical four-point baskets of log terminal points within bounds.

    Only passing baskets are returned unless ``include_failing``.  Output
    order is the canonical basket order and does not depend on ``threads``.
    """
    pool = component_pool(bounds, du_val_only)
    if not pool:
        return []
    threads = max(1, threads)
    chunks = [range(k, len(pool), threads) for k in range(threads)]

    def run(rng):
        return _search(pool, rng, bounds.max_total_nodes, pruned, include_failing)

    if threads == 1:
        hits = run(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            hits = [h for part in ex.map(run, chunks) for h in part]
    hits.sort(key=lambda h: h[0])
    return [
        (Basket(tuple(pool[i][0] for i in idx), tuple(_label(pool[i][1]) for i in idx)), rep)
        for idx, rep in hits
    ]


def _label(rep: PointReport) -> str:
    if rep.label:
        return rep.label
    if isinstance(rep.kind, Rod):
        return f"rod({rep.kind.n},{rep.kind.q})"
    return f"fork({rep.kind.b0};{','.join(str(a.d) for a in rep.kind.arms)})"


def in_passing_set(b: Basket, bounds: Bounds, du_val_only: bool = False) -> bool:
    """Membership in ``enumerate_baskets(bounds)`` without running the search.

    True iff the basket has four log terminal points inside the per-point,
    weight and total bounds (Du Val only if requested) and it verifies.
    """
    if len(b) != 4 or b.total_nodes > bounds.max_total_nodes:
        return False
    for g in b.components:
        rep = point_report(g)
        if not rep.log_terminal or rep.nodes > bounds.max_nodes_per_point:
            return False
        if max(g.weights) > bounds.max_weight:
            return False
        if du_val_only and rep.label is None:
            return False
    return verify_basket(b).overall


# -- theorem cross-check ---------------------------------------------------------------


class TheoremCaseFailure(AssertionError):
    """A generated theorem-case basket failed the necessary conditions."""


def _du_val_names(b: Basket) -> list[str]:
    return sorted(point_report(g).label or "" for g in b.components)


def annotate(b: Basket) -> str | None:
    names = _du_val_names(b)
    if names.count("A1") >= 2 and "D6" in names:
        return "contains D6+2A1, which the classification excludes by a geometric argument"
    return None


def bounds_for(b: Basket) -> Bounds:
    """Smallest enumeration bounds whose domain contains ``b``."""
    return Bounds(
        max(len(g) for g in b.components),
        max(max(g.weights) for g in b.components),
        b.total_nodes,
    )


@dataclass
class CrossCheckReport:
    checked: int = 0
    by_case: dict = field(default_factory=dict)
    enumerated: int | None = None
    found_in_enumeration: int = 0
    missing: list = field(default_factory=list)
    extras: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.missing

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "byCase": {str(k): v for k, v in sorted(self.by_case.items())},
            "enumerated": self.enumerated,
            "foundInEnumeration": self.found_in_enumeration,
            "missing": [{"case": c, "params": _jsonable(p)} for c, p in self.missing],
            "passingNotInTheorem": [
                {"basket": bk.to_dict(), "labels": list(bk.labels), "annotation": note}
                for bk, note in self.extras
            ],
        }


def _jsonable(p: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in p.items()}


def cross_check_theorem(param_bounds=None, enum_bounds: Bounds | None = None,
                        threads: int = 1) -> CrossCheckReport:
    """Check every theorem-case basket against the verifier and the enumerator.

    Each basket must verify (else TheoremCaseFailure) and lie in the passing
    set at its own bounds.  With ``enum_bounds`` the enumerator is also run
    and every theorem basket inside those bounds must be among its output;
    passing baskets matching no theorem case are listed, never failed.
    """
    from .families import ParamBounds, theorem_baskets

    param_bounds = param_bounds or ParamBounds()
    rep = CrossCheckReport()
    theorem_keys = {}
    for case_id, params, b in theorem_baskets(param_bounds):
        vr = verify_basket(b)
        if not vr.overall:
            raise TheoremCaseFailure(f"case {case_id} {params}: {'; '.join(vr.failures)}")
        if not in_passing_set(b, bounds_for(b)):
            rep.missing.append((case_id, params))
        rep.checked += 1
        rep.by_case[case_id] = rep.by_case.get(case_id, 0) + 1
        theorem_keys.setdefault(b.key(), (case_id, params, b))
    if enum_bounds is not None:
        results = enumerate_baskets(enum_bounds, threads=threads)
        rep.enumerated = len(results)
        passing = {bk.key() for bk, _ in results}
        for key, (case_id, params, b) in theorem_keys.items():
            if in_passing_set(b, enum_bounds):
                if key in passing:
                    rep.found_in_enumeration += 1
                else:
                    rep.missing.append((case_id, params))
        for bk, _ in results:
            if bk.key() not in theorem_keys:
                rep.extras.append((bk, annotate(bk)))
    return rep
