"""Command-line front end: ``logdp <subcommand>``.

Exit status: 0 success, 1 a verification or cross-check failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .basket import Basket, Bounds, cross_check_theorem, enumerate_baskets, point_report, verify_basket
from .discrepancy import frac_str
from .families import (
    CASE3_F2,
    CASE3_F3,
    FamilyParameterError,
    ParamBounds,
    RksParams,
    case3_variants,
    rks_sequence,
    theorem_case,
)
from .graph import DualGraph, MalformedGraphError, canonical_form, to_dot
from .surgery import SurgeryError, run_script_json


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


# -- analyze ------------------------------------------------------------------------


def analyze_graph(g: DualGraph) -> dict:
    rep = point_report(g)
    out = dict(rep.kind.to_dict())
    if rep.log_terminal:
        out.update(
            m=rep.m,
            alpha=[frac_str(a) for a in rep.alphas],
            label=rep.label,
            abelianization_order=rep.abelianization_order,
        )
    return out


def cmd_analyze(args) -> int:
    g = DualGraph.from_json(_read(args.graph))
    out = analyze_graph(g)
    if args.dot:
        print(to_dot(g, name="G"), end="")
        return 0
    if args.json:
        print(_dump(out))
        return 0
    print(f"class: {out['kind']}" + (f" ({out['reason']})" if "reason" in out else ""))
    if "m" in out:
        if out["kind"] == "rod":
            print(f"type: ({out['n']},{out['q']})")
        else:
            print(f"center: {out['b0']}  arms: {[a['weights'] for a in out['arms']]}")
        if out["label"]:
            print(f"Du Val: {out['label']}")
        print(f"m: {out['m']}  |det|: {out['abelianization_order']}")
        print("alpha (canonical order): " + " ".join(out["alpha"]))
    return 0


# -- family ---------------------------------------------------------------------------


def _family_name(args) -> str:
    parts = [args.name]
    for key in ("k", "n", "f2", "f3", "s"):
        val = getattr(args, key)
        if val is not None:
            parts.append(f"{key}{val}")
    if args.m:
        parts.append("m" + "-".join(map(str, args.m)))
    return "_".join(parts)


def _family_payload(args):
    name = args.name
    if name == "rks":
        if not args.m:
            raise FamilyParameterError("rks needs --m")
        p = RksParams.of(args.m, 1 if args.s is None else args.s)
        return {"params": {"k": p.k, "m": list(p.m), "s": p.s}, "sequence": rks_sequence(p)}
    if name == "case3-variants":
        kw = {}
        if args.n is not None:
            kw["n_values"] = [args.n]
        return [b.to_dict() for b in case3_variants(paired=args.paired, **kw)]
    if not name.startswith("case"):
        raise FamilyParameterError(f"unknown family {name!r}")
    try:
        case_id = int(name[4:])
    except ValueError as exc:
        raise FamilyParameterError(f"unknown family {name!r}") from exc
    params = {}
    for key in ("k", "n", "f2", "f3", "s"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    if args.m:
        params["m"] = args.m
    return theorem_case(case_id, **params).to_dict()


def cmd_family(args) -> int:
    payload = _family_payload(args)
    text = _dump(payload)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        path = os.path.join(args.out_dir, _family_name(args) + ".json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(path)
    else:
        print(text)
    return 0


# -- surgery / verify / enumerate / theorem -------------------------------------------------


def cmd_surgery(args) -> int:
    for step in run_script_json(_read(args.script)):
        print(_dump(step.to_dict()))
    return 0


def cmd_verify(args) -> int:
    b = Basket.from_json(_read(args.basket))
    rep = verify_basket(b)
    if args.json:
        print(rep.to_json())
    else:
        d = rep.to_dict()
        print(f"status: {d['status']}")
        print(f"m: {d['m']}")
        print(f"bmySum: {d['bmySum']}  ({'pass' if d['bmyPass'] else 'fail'})")
        print(f"degree: {d['degree']}  ({'pass' if d['degreePass'] else 'fail'})")
        for f in d["failures"]:
            print(f"  failed: {f}")
    return 0 if rep.overall else 1


def _bounds(args) -> Bounds:
    return Bounds(args.max_nodes, args.max_weight, args.max_total)


def cmd_enumerate(args) -> int:
    results = enumerate_baskets(
        _bounds(args),
        du_val_only=args.du_val,
        pruned=not args.unpruned,
        include_failing=args.all,
        threads=args.threads,
    )
    for b, rep in results:
        print(_dump({"basket": b.to_dict(), "report": rep.to_dict()}))
    return 0


def cmd_theorem(args) -> int:
    pb = ParamBounds(args.m_max, args.k_max, args.n_max, args.s_max, args.case1_k_max)
    enum = _bounds(args) if args.enumerate else None
    rep = cross_check_theorem(pb, enum, threads=args.threads)
    d = rep.to_dict()
    if args.json:
        print(_dump(d))
    else:
        print(f"theorem baskets verified: {d['checked']}  by case: {d['byCase']}")
        if enum is not None:
            print(f"enumerated passing baskets: {d['enumerated']}")
            print(f"theorem baskets found by the enumerator: {d['foundInEnumeration']}")
            notes = [e for e in d["passingNotInTheorem"] if e["annotation"]]
            print(f"passing baskets outside the theorem list: {len(d['passingNotInTheorem'])}"
                  f" ({len(notes)} annotated)")
            for e in notes:
                print(f"  {e['labels']}: {e['annotation']}")
        print(f"missing: {len(d['missing'])}")
    return 0 if rep.ok else 1


# -- parser ---------------------------------------------------------------------------


def _add_bounds(p, nodes=8, weight=9, total=14):
    p.add_argument("--max-nodes", type=int, default=nodes, help="curves per point")
    p.add_argument("--max-weight", type=int, default=weight)
    p.add_argument("--max-total", type=int, default=total, help="curves over all four points")
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logdp", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify one graph")
    p.add_argument("graph", help="graph JSON file, or - for stdin")
    p.add_argument("--json", action="store_true")
    p.add_argument("--dot", action="store_true", help="emit canonical DOT instead")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("family", help="generate an R_ks rod or a theorem-case basket")
    p.add_argument("name", help="rks, case1 .. case7, or case3-variants")
    p.add_argument("--m", type=_int_list)
    for key in ("k", "n", "s", "f2", "f3"):
        p.add_argument(f"--{key}", type=int)
    p.add_argument("--paired", action="store_true",
                   help="case3-variants: only the theorem's F2/F3 pairings")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("surgery", help="run a blow-up/contraction script")
    p.add_argument("script")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("verify", help="check a four-point basket")
    p.add_argument("basket")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="list passing baskets within bounds (JSON lines)")
    _add_bounds(p)
    p.add_argument("--du-val", action="store_true", help="Du Val points only")
    p.add_argument("--unpruned", action="store_true", help="disable pruning (oracle mode)")
    p.add_argument("--all", action="store_true", help="also emit failing baskets")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("theorem", help="cross-check the theorem cases")
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--k-max", type=int, default=5)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--s-max", type=int, default=5)
    p.add_argument("--case1-k-max", type=int, default=10)
    p.add_argument("--enumerate", action="store_true", help="also run the enumerator")
    _add_bounds(p, nodes=6, weight=5, total=10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_theorem)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (InputError, MalformedGraphError, FamilyParameterError, SurgeryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
