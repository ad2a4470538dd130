"""Command line front-end.

Exit codes: 0 computed and property holds, 1 property fails (witness printed),
2 inconclusive (caps or bound), 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .algebra import Algebra, MonomialOrder
from .compose import (
    Admissible,
    Composition,
    Holds,
    check_admissible,
    check_commutation,
    check_nonequality_compatible,
    check_order_compatible,
    substitute,
)
from .errors import SPBWError, ValidationErrors
from .io import load_algebra, resolve_algebra_path
from .sagbi import (
    Caps,
    Counterexample,
    FSet,
    Inconclusive,
    Member,
    VerifiedUpTo,
    membership,
    sagbi_build,
    sagbi_test,
    snf,
)

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _common(p: argparse.ArgumentParser, family: bool = True, target: bool = False):
    p.add_argument("-a", "--algebra", required=True, help="algebra file or shipped fixture name")
    p.add_argument("--order", help="override the order, e.g. deglex:z,y,x")
    if family:
        p.add_argument("-F", dest="family", nargs="+", default=[], metavar="POLY", help="generating family")
    if target:
        p.add_argument("-s", dest="target", metavar="POLY", help="element to reduce")
    p.add_argument("--max-branches", type=int)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--json", action="store_true", help="machine-readable report")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="spbw", description="SAGBI bases in skew PBW extensions")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mul", help="multiply polynomials in the written order")
    _common(p, family=False)
    p.add_argument("polys", nargs="+", metavar="POLY")

    p = sub.add_parser("snf", help="SAGBI normal form")
    _common(p, target=True)
    p.add_argument("--strategy", choices=("first", "all"), default="first")
    p.add_argument("--trace", action="store_true")

    p = sub.add_parser("member", help="subalgebra membership")
    _common(p, target=True)
    p.add_argument("--max-degree", type=int, help="also run the SAGBI test to certify non-membership")
    p.add_argument("--trace", action="store_true")

    p = sub.add_parser("sagbi", help="SAGBI test or bounded completion")
    p.add_argument("action", choices=("test", "build"))
    _common(p)
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--max-iter", type=int, default=10)

    p = sub.add_parser("compose", help="composition by Theta")
    p.add_argument("action", choices=("check", "apply"))
    _common(p)
    p.add_argument("--theta", nargs="+", required=True, metavar="POLY")
    p.add_argument("--max-degree", type=int, default=4)
    return ap


def _algebra(args) -> Algebra:
    try:
        path = resolve_algebra_path(args.algebra)
    except FileNotFoundError as e:
        raise InputError(f"algebra file not found: {e}") from e
    a = load_algebra(path)
    if args.order:
        kind, _, prec = args.order.partition(":")
        names = [s.strip() for s in prec.split(",")] if prec else list(a.generators)
        try:
            a = a.with_order(MonomialOrder.from_names(kind.strip(), names, a.generators))
        except ValueError as e:
            raise InputError(f"--order: {e}") from e
    return a


def _caps(args) -> Caps:
    caps = Caps.from_env()
    if args.max_branches is not None:
        caps = replace(caps, max_branches=args.max_branches)
    if args.max_steps is not None:
        caps = replace(caps, max_steps=args.max_steps)
    return caps


def _trace_doc(fs: FSet, tr) -> dict:
    return {"remainder": str(tr.remainder), "steps": tr.render(fs), "complete": tr.complete}


def _trace_lines(fs: FSet, tr) -> list[str]:
    return [f"  - ({k}) * {fs.name(seq)}" for k, seq in tr.steps]


def _cmd_mul(a, args, caps):
    polys = [a.parse(t) for t in args.polys]
    out = polys[0]
    for p in polys[1:]:
        out = out * p
    return EXIT_OK, {"verdict": "computed", "result": str(out)}, [f"result: {out}"]


def _cmd_snf(a, args, caps):
    fs = FSet(a, [a.parse(t) for t in args.family])
    if args.target is None:
        raise InputError("snf needs -s")
    s = a.parse(args.target)
    if args.strategy == "first":
        tr = snf(a, s, fs, "first", caps)
        doc = {"verdict": "computed" if tr.complete else "inconclusive", "remainder": str(tr.remainder)}
        lines = [f"remainder: {tr.remainder}"]
        if args.trace:
            doc["trace"] = _trace_doc(fs, tr)
            lines += ["trace:"] + _trace_lines(fs, tr)
        return (EXIT_OK if tr.complete else EXIT_INCONCLUSIVE), doc, lines
    res = snf(a, s, fs, "all", caps)
    doc = {
        "verdict": "inconclusive" if res.inconclusive else "computed",
        "remainders": [str(r) for r in res.remainders],
        "stats": {"branches": res.branches},
    }
    lines = ["remainders:"] + [f"  {r}" for r in res.remainders]
    if args.trace:
        doc["traces"] = [_trace_doc(fs, t) for t in res.traces]
        for t in res.traces:
            lines += [f"trace to {t.remainder}:"] + _trace_lines(fs, t)
    if res.inconclusive:
        lines.append("inconclusive: branch cap reached")
    return (EXIT_INCONCLUSIVE if res.inconclusive else EXIT_OK), doc, lines


def _cmd_member(a, args, caps):
    fs = FSet(a, [a.parse(t) for t in args.family])
    if args.target is None:
        raise InputError("member needs -s")
    s = a.parse(args.target)
    report = sagbi_test(a, fs, args.max_degree, caps) if args.max_degree is not None else None
    res = membership(a, s, fs, caps, report)
    if isinstance(res, Member):
        doc = {"verdict": "Member", "trace": _trace_doc(fs, res.trace)}
        lines = ["verdict: Member"] + _trace_lines(fs, res.trace)
        return EXIT_OK, doc, lines
    doc = {
        "verdict": "NoReductionFound",
        "remainders": [str(r) for r in res.remainders],
        "certified": res.certified,
        "note": res.note,
    }
    if report is not None:
        doc["sagbi_report"] = str(report.verdict)
    lines = ["verdict: NoReductionFound", f"note: {res.note}"] + [f"  remainder: {r}" for r in res.remainders]
    code = EXIT_INCONCLUSIVE if res.inconclusive else EXIT_FAIL
    return code, doc, lines


def _report_doc(fs: FSet, rep) -> tuple[int, dict, list[str]]:
    v = rep.verdict
    doc = {"verdict": str(v), "stats": rep.stats, "warnings": rep.warnings}
    lines = [f"verdict: {v}"]
    if isinstance(v, Counterexample):
        doc["witness"] = {
            "pair": [fs.name(v.pair.left), fs.name(v.pair.right)],
            "k": str(v.pair.k),
            "t_polynomial": str(v.t),
            "remainder": str(v.remainder),
            "trace": _trace_doc(fs, v.trace),
        }
        lines += [
            f"pair: ({fs.name(v.pair.left)}, {fs.name(v.pair.right)}) k={v.pair.k}",
            f"T: {v.t}",
            f"remainder: {v.remainder}",
        ]
        code = EXIT_FAIL
    elif isinstance(v, Inconclusive):
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    lines += [f"warning: {w}" for w in rep.warnings]
    return code, doc, lines


def _cmd_sagbi(a, args, caps):
    F = [a.parse(t) for t in args.family]
    if not F:
        raise InputError("sagbi needs -F")
    if args.action == "test":
        fs = FSet(a, F)
        return _report_doc(fs, sagbi_test(a, fs, args.max_degree, caps))
    G, rep, adjoined = sagbi_build(a, F, args.max_degree, args.max_iter, caps)
    fs = FSet(a, G)
    code, doc, lines = _report_doc(fs, rep)
    if isinstance(rep.verdict, Counterexample):
        code = EXIT_INCONCLUSIVE
    doc["basis"] = [str(g) for g in G]
    doc["adjoined"] = [
        {"element": str(ad.element), "pair": [fs.name(ad.pair.left), fs.name(ad.pair.right)]} for ad in adjoined
    ]
    lines = ["basis:"] + [f"  q{i + 1} = {g}" for i, g in enumerate(G)] + lines
    return code, doc, lines


def _cmd_compose(a, args, caps):
    theta = [a.parse(t) for t in args.theta]
    comp = Composition(a, theta)
    if args.action == "apply":
        F = [substitute(a, a.parse(t), comp) for t in args.family]
        adm = check_admissible(a, comp)
        doc = {"verdict": "computed", "admissible": str(adm), "images": [str(f) for f in F]}
        lines = [f"admissible: {adm}"] + [f"  {f}" for f in F]
        return EXIT_OK, doc, lines
    D = args.max_degree
    if args.family:
        F = [a.parse(t) for t in args.family]
        rep = check_commutation(a, F, comp, D, caps)
        doc = {
            "admissible": str(rep.admissible),
            "order_compatible": str(rep.order_compatible),
            "nonequality_compatible": str(rep.nonequality_compatible),
            "implication_ok": rep.implication_ok,
            "forward": rep.forward,
            "scaled_degree": rep.scaled_D,
            "sagbi_F": str(rep.report_F.verdict) if rep.report_F else None,
            "sagbi_F_theta": str(rep.report_FTheta.verdict) if rep.report_FTheta else None,
            "hat_failures": len(rep.hat_failures),
            "lemma_failures": len(rep.lemma_failures),
            "converse": rep.converse,
        }
        ok = isinstance(rep.admissible, Admissible) and isinstance(rep.order_compatible, Holds) and rep.consistent
        code = EXIT_OK if ok else EXIT_FAIL
        if rep.forward == "inconclusive":
            code = EXIT_INCONCLUSIVE
    else:
        adm = check_admissible(a, comp)
        oc = check_order_compatible(a, comp, D)
        ne = check_nonequality_compatible(a, comp, D)
        doc = {"admissible": str(adm), "order_compatible": str(oc), "nonequality_compatible": str(ne)}
        ok = isinstance(adm, Admissible) and isinstance(oc, Holds) and isinstance(ne, Holds)
        code = EXIT_OK if ok else EXIT_FAIL
    doc["verdict"] = "holds" if code == EXIT_OK else "fails" if code == EXIT_FAIL else "inconclusive"
    lines = [f"{k}: {v}" for k, v in doc.items() if k != "verdict"] + [f"verdict: {doc['verdict']}"]
    return code, doc, lines


COMMANDS = {"mul": _cmd_mul, "snf": _cmd_snf, "member": _cmd_member, "sagbi": _cmd_sagbi, "compose": _cmd_compose}


def _option_strings(ap: argparse.ArgumentParser) -> set[str]:
    found = set(ap._option_string_actions)
    for action in ap._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                found |= _option_strings(sub)
    return found


def _protect_values(ap: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Keep polynomials such as "-y+x" from being read as options.

    Any token starting with '-' that is not a known option gets a leading space,
    which argparse treats as a value and the expression parser ignores.
    """
    known = _option_strings(ap)
    out = []
    for tok in argv:
        if tok.startswith("-") and tok != "-" and tok.split("=", 1)[0] not in known:
            tok = " " + tok
        out.append(tok)
    return out


def run_command(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        ap = build_parser()
        args = ap.parse_args(_protect_values(ap, list(argv)))
        a = _algebra(args)
        caps = _caps(args)
        code, doc, lines = COMMANDS[args.command](a, args, caps)
    except InputError as e:
        print(f"error: {e}", file=err)
        return EXIT_INPUT
    except ValidationErrors as e:
        print("error: invalid presentation", file=err)
        for issue in e.issues:
            print(f"  {issue}", file=err)
        return EXIT_INPUT
    except (SPBWError, ValueError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=err)
        return EXIT_INPUT
    order = a.order.describe(a.generators)
    if args.json:
        report = {"command": ["spbw"] + list(argv), "algebra": a.name, "order": order, "exit_code": code}
        report.update(doc)
        print(json.dumps(report, indent=2), file=out)
    else:
        print(f"algebra: {a.name}", file=out)
        print(f"order: {order}", file=out)
        for line in lines:
            print(line, file=out)
    return code


def main(argv: list[str] | None = None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
