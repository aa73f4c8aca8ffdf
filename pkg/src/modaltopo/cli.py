"""Command line entry point: ``modaltopo <command> ...``.

Exit codes: 0 pass / valid / nothing found, 1 fail / countermodel found,
2 usage or input error, 3 size cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from . import dsem, kripke, topo
from .bits import members
from .errors import BudgetExceeded, InvalidAssignment, InvalidTopology, NotTransitive, ParseError
from .formula import AXIOM_NAMES, named_axiom, parse, scheme_C
from .glue import assignment_from_json, default_assignment, glue
from .harness import (FAIL, SUITES, VACUOUS, SearchSpec, census, countermodel_search,
                      run_property_suite, to_csv)
from .kripke import FINAL_KINDS, Frame, FrameConstraints
from .topo import TopSpace

OK, FOUND, USAGE, CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, obj: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def _load(path: str | None):
    if path is None:
        raise UsageError("--file is required")
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e})") from None


def _formula(args):
    if args.formula:
        return parse(args.formula)
    if args.axiom:
        m = re.fullmatch(r"C(\d+)", args.axiom)
        if m:
            return scheme_C(int(m.group(1)))
        if args.axiom not in AXIOM_NAMES:
            raise UsageError(f"unknown axiom {args.axiom!r}; known: {', '.join(AXIOM_NAMES)}, C<n>")
        return named_axiom(args.axiom)
    if args.n is not None:
        return scheme_C(args.n)
    raise UsageError("give --formula, --axiom or --n")


def _load_frame(args) -> Frame:
    try:
        return Frame.from_json(_load(args.file))
    except (KeyError, TypeError) as e:
        raise UsageError(f"malformed frame JSON: {e}") from None


def _load_space(args) -> TopSpace:
    obj = _load(args.file)
    try:
        return TopSpace.from_json(obj)
    except (KeyError, TypeError) as e:
        raise UsageError(f"malformed space JSON: {e}") from None


def _check_result(args, phi, cm, where: str) -> int:
    out = {"formula": str(phi), "valid": cm is None}
    if cm is None:
        _emit(args, out, f"valid: {phi} holds {where}")
        return OK
    out["countermodel"] = cm.to_json()
    _emit(args, out, f"not valid: {phi}\ncountermodel: {json.dumps(cm.to_json())}")
    return FOUND


# ------------------------------------------------------------ frame

def cmd_frame(args) -> int:
    frame = _load_frame(args)
    if args.action == "validate":
        transitive = kripke.is_transitive(frame)
        out = {"points": frame.n, "edges": len(frame.edges()), "transitive": transitive}
        _emit(args, out, f"ok: {frame.n} points, {len(frame.edges())} edges, "
                         f"transitive={transitive}")
        return OK
    if args.action == "classify":
        out = {"points": frame.n, "transitive": kripke.is_transitive(frame),
               "reflexive": kripke.is_reflexive(frame),
               "irreflexive": kripke.is_irreflexive(frame)}
        if out["transitive"]:
            dec = kripke.clusters(frame)
            out["circumference"] = kripke.circumference(frame)
            out["clusters"] = [{"members": members(c), "kind": k.value, "final": fin}
                               for c, k, fin in zip(dec.clusters, dec.kinds, dec.final)]
        lines = [f"{k}: {v}" for k, v in out.items() if k != "clusters"]
        for c in out.get("clusters", []):
            lines.append(f"cluster {c['members']}: {c['kind']}" + (" (final)" if c["final"] else ""))
        _emit(args, out, "\n".join(lines))
        return OK
    phi = _formula(args)
    return _check_result(args, phi, kripke.countermodel(frame, phi), "in the frame")


# ------------------------------------------------------------ space

def cmd_space(args) -> int:
    X = _load_space(args)
    if args.action == "validate":
        out = {"points": X.n, "opens": len(X.opens)}
        _emit(args, out, f"ok: {X.n} points, {len(X.opens)} open sets")
        return OK
    if args.action == "classify":
        c = topo.classify(X)
        out = c.to_json()
        out.update(HI2=topo.hereditarily_irresolvable(X, 2),
                   HI3=topo.hereditarily_irresolvable(X, 3),
                   OI=topo.openly_irresolvable(X),
                   resolvable2=topo.k_resolvable(X, 2))
        _emit(args, out, "\n".join(f"{k}: {v}" for k, v in out.items()))
        return OK
    phi = _formula(args)
    cm = dsem.countermodel(X, phi, args.semantics)
    return _check_result(args, phi, cm, f"in the space ({args.semantics}-semantics)")


# ------------------------------------------------------------ glue

def cmd_glue(args) -> int:
    frame = _load_frame(args)
    choice = args.assignment
    try:
        if choice.startswith("default:"):
            assignment = default_assignment(frame, int(choice.split(":", 1)[1]))
        else:
            with open(choice) as fh:
                assignment = assignment_from_json(json.load(fh))
    except (ValueError, OSError, KeyError) as e:
        raise UsageError(f"bad assignment {choice!r}: {e}") from None
    g = glue(frame, assignment, strict=not args.lenient)
    dm = dsem.DMorphism(g.f, g.space, frame)
    bad = dsem.d_morphism_violation(dm)
    out = g.to_json()
    out["d_morphism"] = bad is None
    if bad is not None:
        out["violation"] = {"condition": bad.condition, "detail": bad.detail}
    text = (f"glued space: {g.space.n} points, {len(g.space.opens)} open sets\n"
            f"map: {list(g.f)}\nd-morphism: {bad is None}" + ("" if bad is None else f" ({bad})"))
    _emit(args, out, text)
    return OK if bad is None else FOUND


# ------------------------------------------------------------ countermodel

def cmd_countermodel(args) -> int:
    phi = _formula(args) if (args.formula or args.axiom) else None
    if phi is None:
        raise UsageError("give --formula or --axiom")
    mode = {"frame": "frame", "d": "space-d", "c": "space-c"}[args.mode]
    constraints = FrameConstraints(transitive=not args.no_transitive,
                                   reflexive=args.reflexive,
                                   circumference_at_most=args.n,
                                   final_clusters=args.final,
                                   iso_dedup=not args.no_transitive)
    result = countermodel_search(SearchSpec(phi, args.max_size, constraints, mode))
    text = result.message
    if result.found:
        text += (f"\nstructure: {json.dumps(result.structure.to_json())}"
                 f"\ncountermodel: {json.dumps(result.countermodel.to_json())}")
    _emit(args, result.to_json(), text)
    return FOUND if result.found else OK


# ------------------------------------------------------------ census / suite

def cmd_census(args) -> int:
    rows = census(args.max_size)
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        sys.stdout.write(to_csv(rows))
    return OK


def cmd_suite(args) -> int:
    if args.action == "list":
        for sid in SUITES:
            print(sid)
        return OK
    if args.id is None:
        raise UsageError("suite run needs an id (or 'all')")
    try:
        reports = run_property_suite(args.id, args.max_size, args.seed)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2))
    else:
        for r in reports:
            print(r.line())
        vac = sum(r.verdict == VACUOUS for r in reports)
        if vac:
            print(f"{vac} suite(s) VACUOUS: hypothesis never held at these sizes")
    return FOUND if any(r.verdict == FAIL for r in reports) else OK


# ------------------------------------------------------------ parser

def _formula_flags(p):
    p.add_argument("--formula", help="formula text, e.g. '[]p -> [][]p'")
    p.add_argument("--axiom", help=f"named axiom ({', '.join(AXIOM_NAMES)}) or C<n>")
    p.add_argument("--n", type=int, help="circumference bound / scheme index")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modaltopo",
                                 description="Finite Kripke frames and finite spaces under "
                                             "the derived-set semantics.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("frame", help="check, classify or validate a frame JSON file")
    p.add_argument("action", choices=["check", "classify", "validate"])
    p.add_argument("--file")
    _formula_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_frame)

    p = sub.add_parser("space", help="check, classify or validate a space JSON file")
    p.add_argument("action", choices=["check", "classify", "validate"])
    p.add_argument("--file")
    p.add_argument("--semantics", choices=["d", "c"], default="d")
    _formula_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_space)

    p = sub.add_parser("glue", help="glue cluster spaces along a transitive frame")
    p.add_argument("--file")
    p.add_argument("--assignment", default="default:2",
                   help="'default:<cell_size>' or a JSON assignment file")
    p.add_argument("--lenient", action="store_true",
                   help="only require cells to partition each cluster space")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("countermodel", help="bounded countermodel search")
    _formula_flags(p)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--mode", choices=["frame", "d", "c"], default="frame")
    p.add_argument("--reflexive", action="store_true")
    p.add_argument("--no-transitive", action="store_true")
    p.add_argument("--final", choices=FINAL_KINDS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_countermodel)

    p = sub.add_parser("census", help="flags and axiom validity for every small topology")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("suite", help="run exhaustive property suites")
    p.add_argument("action", choices=["run", "list"])
    p.add_argument("id", nargs="?")
    p.add_argument("--max-size", type=int, help="override the suite's size cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return CAP
    except (UsageError, ParseError, InvalidTopology, InvalidAssignment, NotTransitive,
            ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
