"""Blow-ups, contractions of (-1)-curves and conic-bundle fibres.

Configurations are ordinary :class:`DualGraph` objects whose weights may be
1 or less.  Every operation returns a new graph.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Mapping, Sequence

from . import linalg
from .graph import CurveNode, DualGraph, MalformedGraphError, MIN_WEIGHT, build_matrix


class SurgeryError(ValueError):
    pass


class NotAFiberError(ValueError):
    pass


class ImpossibleCoverError(ValueError):
    pass


def _rebuild(nodes, edges) -> DualGraph:
    try:
        return DualGraph(tuple(nodes), tuple(edges))
    except MalformedGraphError as exc:
        raise SurgeryError(str(exc)) from exc


def _check_node(g: DualGraph, nid: int) -> None:
    if nid not in g.ids:
        raise SurgeryError(f"no node {nid}")


def contract(g: DualGraph, nid: int) -> DualGraph:
    """Contract the (-1)-curve ``nid``.

    A neighbor meeting it with multiplicity a loses a^2 from its weight; two
    neighbors with multiplicities a, b gain a*b in their mutual intersection.
    """
    _check_node(g, nid)
    if g.weight(nid) != 1:
        raise SurgeryError(f"node {nid} has weight {g.weight(nid)}, not a (-1)-curve")
    nbrs = g.neighbors(nid)
    nodes = [
        CurveNode(n.id, n.weight - nbrs.get(n.id, 0) ** 2) for n in g.nodes if n.id != nid
    ]
    edges = [e for e in g.edges if nid not in e[:2]]
    items = sorted(nbrs.items())
    for i, (a, ma) in enumerate(items):
        for b, mb in items[i + 1 :]:
            edges.append((a, b, ma * mb))
    return _rebuild(nodes, edges)


def _new_id(g: DualGraph) -> int:
    return max(g.ids, default=-1) + 1


def blow_up_point(g: DualGraph, nid: int) -> DualGraph:
    """Blow up a general point of curve ``nid``."""
    _check_node(g, nid)
    e = _new_id(g)
    nodes = [CurveNode(n.id, n.weight + (n.id == nid)) for n in g.nodes]
    nodes.append(CurveNode(e, 1))
    return _rebuild(nodes, list(g.edges) + [(nid, e, 1)])


def blow_up_edge(g: DualGraph, a: int, b: int) -> DualGraph:
    """Blow up one transverse intersection point of curves a and b."""
    if g.multiplicity(a, b) < 1:
        raise SurgeryError(f"no edge between {a} and {b}")
    e = _new_id(g)
    nodes = [CurveNode(n.id, n.weight + (n.id in (a, b))) for n in g.nodes]
    nodes.append(CurveNode(e, 1))
    lo, hi = min(a, b), max(a, b)
    edges = []
    for x, y, m in g.edges:
        if (x, y) == (lo, hi):
            m -= 1
        if m:
            edges.append((x, y, m))
    edges += [(a, e, 1), (b, e, 1)]
    return _rebuild(nodes, edges)


@dataclass(frozen=True)
class Step:
    op: str
    args: tuple
    graph: DualGraph
    k_squared: int | None

    def to_dict(self) -> dict:
        return {
            "op": self.op,
            "args": list(self.args),
            "graph": self.graph.to_dict(),
            "k_squared": self.k_squared,
        }


def minimalize_steps(g: DualGraph, k_squared: int | None = None) -> list[Step]:
    """Contract (-1)-curves, lowest id first, until none is left.

    Each contraction raises K^2 by one.  The weight floor of the graph type
    stops runaway contractions.
    """
    steps = []
    while True:
        ones = [n.id for n in g.nodes if n.weight == 1]
        if not ones:
            return steps
        nid = min(ones)
        g = contract(g, nid)
        if any(n.weight < MIN_WEIGHT for n in g.nodes):  # pragma: no cover - guarded in DualGraph
            raise SurgeryError("weights diverged during minimalization")
        if k_squared is not None:
            k_squared += 1
        steps.append(Step("contract", (nid,), g, k_squared))


def minimalize(g: DualGraph) -> DualGraph:
    steps = minimalize_steps(g)
    return steps[-1].graph if steps else g


# -- fibres -----------------------------------------------------------------------


@dataclass(frozen=True)
class FiberClass:
    support: tuple[int, ...]
    multiplicities: tuple[int, ...]

    def __getitem__(self, nid: int) -> int:
        return self.multiplicities[self.support.index(nid)]

    def self_intersection(self, g: DualGraph) -> int:
        m = build_matrix(g)
        f = [self[i] for i in m.ids]
        return sum(a * b for a, b in zip(f, linalg.mat_vec(m.rows, f)))

    def k_degree(self, g: DualGraph) -> int:
        return sum(self[n.id] * (n.weight - 2) for n in g.nodes)


def fiber_class(g: DualGraph) -> FiberClass:
    """The fibre supported on ``g``, if ``g`` is a full fibre of a conic bundle.

    That is the primitive positive kernel vector of the intersection matrix,
    which must be unique and satisfy K.F = -2.
    """
    if not g.nodes or not g.is_connected():
        raise NotAFiberError("a fibre support must be nonempty and connected")
    m = build_matrix(g)
    basis = linalg.nullspace(m.rows)
    if len(basis) != 1:
        raise NotAFiberError(f"kernel has dimension {len(basis)}, expected 1")
    vec = basis[0]
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g0 = 0
    for v in ints:
        g0 = gcd(g0, v)
    ints = [v // g0 for v in ints]
    if all(v < 0 for v in ints):
        ints = [-v for v in ints]
    if not all(v > 0 for v in ints):
        raise NotAFiberError("kernel vector is not positive on every curve")
    f = FiberClass(m.ids, tuple(ints))
    if f.self_intersection(g) != 0:  # pragma: no cover - kernel vector
        raise AssertionError("kernel vector with nonzero square")
    if f.k_degree(g) != -2:
        raise NotAFiberError(f"K.F = {f.k_degree(g)}, expected -2")
    return f


def fiber_a() -> DualGraph:
    """(-2) - (-1) - (-2)."""
    return DualGraph.chain([2, 1, 2])


def fiber_b(spine: int) -> DualGraph:
    """(-1)-curve, a spine of ``spine`` (-2)-curves, two (-2)-tips on its end."""
    if spine < 1:
        raise ValueError("spine length must be >= 1")
    g = DualGraph.chain([1] + [2] * spine)
    last = spine
    nodes = g.nodes + (CurveNode(last + 1, 2), CurveNode(last + 2, 2))
    return DualGraph(nodes, g.edges + ((last, last + 1, 1), (last, last + 2, 1)))


def fiber_c(spine: int) -> DualGraph:
    """Two (-1)-curves joined by a spine of ``spine`` (-2)-curves."""
    if spine < 0:
        raise ValueError("spine length must be >= 0")
    return DualGraph.chain([1] + [2] * spine + [1])


def hurwitz_ramification(g_x: int, g_y: int, n: int) -> int:
    """deg R for a degree-n cover X -> Y of curves of genera g_x, g_y."""
    if n < 1 or g_x < 0 or g_y < 0:
        raise ValueError("need n >= 1 and nonnegative genera")
    r = (2 * g_x - 2) - n * (2 * g_y - 2)
    if r < 0:
        raise ImpossibleCoverError(f"ramification degree would be {r}")
    return r


# -- anticanonical wheels --------------------------------------------------------------


def divisor_square(g: DualGraph, coeffs: Mapping[int, int] | None = None) -> int:
    """(sum c_i C_i)^2, all coefficients 1 by default."""
    m = build_matrix(g)
    c = [1 if coeffs is None else coeffs.get(i, 0) for i in m.ids]
    return sum(a * b for a, b in zip(c, linalg.mat_vec(m.rows, c)))


def is_anticanonical(g: DualGraph) -> bool:
    """Whether W = sum C_i can be -K: W.C = -K.C = 2 - w for every curve."""
    m = build_matrix(g)
    wc = linalg.mat_vec(m.rows, [1] * len(m.ids))
    return all(x == 2 - g.weight(i) for i, x in zip(m.ids, wc))


def wheel_c() -> DualGraph:
    """Triangle of a (-1)-curve C' (id 0) and (-2)-curves D1, D2."""
    nodes = (CurveNode(0, 1), CurveNode(1, 2), CurveNode(2, 2))
    return DualGraph(nodes, ((0, 1, 1), (0, 2, 1), (1, 2, 1)))


def wheel_d(d3_weight: int = 2) -> DualGraph:
    """(-1)-curve C' (id 0) meeting D3 (id 1) in two points."""
    if d3_weight not in (2, 3):
        raise ValueError("D3 is a (-2)- or (-3)-curve")
    return DualGraph((CurveNode(0, 1), CurveNode(1, d3_weight)), ((0, 1, 2),))


def wheel_script(case: str) -> dict:
    """Surgery script for a wheel, starting from K^2 = W^2.

    Case "d3" contracts C' to reach the surface whose (-2)-curves give the
    Du Val model; in "c" and "d2" that surface is already the wheel's.
    """
    graphs = {"c": wheel_c, "d2": lambda: wheel_d(2), "d3": lambda: wheel_d(3)}
    if case not in graphs:
        raise ValueError(f"unknown wheel case {case!r}")
    g = graphs[case]()
    steps = [{"op": "contract", "args": [0]}] if case == "d3" else []
    return {"graph": g.to_dict(), "k_squared": divisor_square(g), "steps": steps}


# -- scripts ------------------------------------------------------------------------


def apply_op(g: DualGraph, op: str, args: Sequence, k_squared: int | None) -> list[Step]:
    if op == "contract":
        (nid,) = args
        out = contract(g, int(nid))
        return [Step(op, (int(nid),), out, None if k_squared is None else k_squared + 1)]
    if op == "blow_up_point":
        (nid,) = args
        out = blow_up_point(g, int(nid))
        return [Step(op, (int(nid),), out, None if k_squared is None else k_squared - 1)]
    if op == "blow_up_edge":
        a, b = args
        out = blow_up_edge(g, int(a), int(b))
        return [Step(op, (int(a), int(b)), out, None if k_squared is None else k_squared - 1)]
    if op == "minimalize":
        if args:
            raise SurgeryError("minimalize takes no arguments")
        steps = minimalize_steps(g, k_squared)
        return steps or [Step("minimalize", (), g, k_squared)]
    raise SurgeryError(f"unknown operation {op!r}")


def run_script(script: Mapping) -> list[Step]:
    """Apply ``script["steps"]`` to ``script["graph"]``.

    Script format: {"graph": <graph JSON>, "k_squared": optional int,
    "steps": [{"op": name, "args": [...]}, ...]}.
    """
    try:
        g = DualGraph.from_dict(script["graph"])
        k2 = script.get("k_squared")
        ops = [(s["op"], list(s.get("args", []))) for s in script["steps"]]
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedGraphError(f"surgery script does not match schema: {exc}") from exc
    out = []
    for op, args in ops:
        try:
            new = apply_op(g, op, args, k2)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, SurgeryError):
                raise
            raise SurgeryError(f"bad arguments for {op}: {args}") from exc
        out.extend(new)
        g, k2 = new[-1].graph, new[-1].k_squared
    return out


def run_script_json(text: str) -> list[Step]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedGraphError(f"invalid JSON: {exc}") from exc
    return run_script(data)
