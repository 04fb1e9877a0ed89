"""Command line front end: eval, check, table, intersect, models."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .kernel import AlgebraError, Element, ModelSpec, Ring, _degree_buckets
from .models import describe_builtins, resolve_model
from .expr import ExpressionError, describe_value, evaluate, parse
from .extended import cap as cap_product
from .extended import loop_intersection
from .loop import bv_delta, loop_bracket
from .verify import reports_to_jsonl, run_suite


def _fail(message: str) -> int:
    print("error: %s" % message, file=sys.stderr)
    return 2


def _split_top_level(text: str) -> list[str]:
    """Split a comma list of expressions, ignoring commas inside brackets."""
    parts, depth, start = [], 0, 0
    for pos, char in enumerate(text):
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        elif char == "," and depth == 0:
            parts.append(text[start:pos])
            start = pos + 1
    parts.append(text[start:])
    return [part.strip() for part in parts if part.strip()]


def _json_degree(label: str):
    try:
        return int(label)
    except ValueError:
        return label


def _cmd_eval(args) -> int:
    model = resolve_model(args.model)
    value = evaluate(parse(args.expr), model)
    rendered, ring, degree_label = describe_value(value, unicode=args.unicode)
    if args.json:
        payload = {
            "model": model.name,
            "expr": args.expr,
            "value": rendered,
            "ring": ring,
            "degree": _json_degree(degree_label),
        }
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print("%s : %s, degree %s" % (rendered, ring, degree_label))
    return 0


def _cmd_check(args) -> int:
    model = resolve_model(args.model)
    selection = None
    if args.only:
        selection = []
        for chunk in args.only:
            selection.extend(part.strip() for part in chunk.split(",") if part.strip())
    reports = run_suite(model, args.trials, args.seed, selection, ops=args.ops)
    failed = [report for report in reports if report.failed()]
    if args.json:
        print(reports_to_jsonl(reports))
    else:
        for report in reports:
            print("%-4s %-32s trials=%d" % (report.status.upper(), report.identity, report.trials))
        suffix = "" if args.ops == "standard" else ", ops %s" % args.ops
        print(
            "%d/%d identities passed (model %s, seed %s%s)"
            % (len(reports) - len(failed), len(reports), model.name, args.seed, suffix)
        )
        for report in failed:
            witness = report.witness
            print("counterexample for %s (trial %d):" % (report.identity, witness["trial"]))
            for arg_text in witness["minimized_args"]:
                print("  arg: %s" % arg_text)
            for check in witness["minimized_failing"]:
                print("  %s" % check["check"])
                print("    lhs = %s" % check["lhs"])
                print("    rhs = %s" % check["rhs"])
    return 1 if failed else 0


def _basis_monomials(model: ModelSpec, ring: Ring, max_degree: int, even_cap: int):
    buckets = _degree_buckets(model, ring, even_cap)
    for deg in sorted(buckets):
        if -max_degree <= deg <= max_degree:
            for mono in buckets[deg]:
                yield Element.monomial(model, ring, mono)


def _cmd_table(args) -> int:
    model = resolve_model(args.model)
    show = lambda e: e.render(unicode=args.unicode)
    if args.op == "delta":
        for b in _basis_monomials(model, Ring.LOOP, args.max_degree, args.max_exp):
            print("Delta(%s) = %s" % (show(b), show(bv_delta(b))))
        return 0
    if args.op in ("product", "bracket"):
        apply = loop_bracket if args.op == "bracket" else lambda x, y: x * y
        name = args.op
        basis = list(_basis_monomials(model, Ring.LOOP, args.max_degree, args.max_exp))
        for b in basis:
            for c in basis:
                print("%s(%s, %s) = %s" % (name, show(b), show(c), show(apply(b, c))))
        return 0
    if args.op == "cap":
        coh_basis = list(_basis_monomials(model, Ring.COH, args.max_degree, args.max_exp))
        loop_basis = list(_basis_monomials(model, Ring.LOOP, args.max_degree, args.max_exp))
        for w in coh_basis:
            for b in loop_basis:
                print("cap(%s, %s) = %s" % (show(w), show(b), show(cap_product(w, b))))
        return 0
    return _fail("unknown table op %r" % args.op)


def _cmd_intersect(args) -> int:
    model = resolve_model(args.model)

    def eval_classes(text):
        classes = []
        for part in _split_top_level(text or ""):
            value = evaluate(parse(part), model)
            if isinstance(value, Fraction):
                value = Element.unit(model, Ring.COH).scale(value)
            classes.append(value)
        return classes

    ats = eval_classes(args.at)
    frees = eval_classes(args.free)
    family = evaluate(parse(args.family), model)
    if isinstance(family, Fraction):
        family = Element.unit(model, Ring.LOOP).scale(family)
    result = loop_intersection(ats, frees, family)
    rendered, ring, degree_label = describe_value(result, unicode=args.unicode)
    if args.json:
        payload = {
            "model": model.name,
            "at": args.at or "",
            "free": args.free or "",
            "family": args.family,
            "value": rendered,
            "ring": ring,
            "degree": _json_degree(degree_label),
        }
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print("%s : %s, degree %s" % (rendered, ring, degree_label))
    return 0


def _cmd_models(args) -> int:
    for line in describe_builtins():
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopbv",
        description="Exact string-topology BV algebra calculator for exterior rational models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate an expression")
    p_eval.add_argument("--model", required=True, help="model name, exterior:d1,d2,... or JSON file")
    p_eval.add_argument("expr", help="expression, e.g. 'bracket(a1, u1^3)'")
    p_eval.add_argument("--json", action="store_true", help="machine-readable output")
    p_eval.add_argument("--unicode", action="store_true", help="pretty generator names")
    p_eval.set_defaults(func=_cmd_eval)

    p_check = sub.add_parser("check", help="run the identity verification suite")
    p_check.add_argument("--model", required=True)
    p_check.add_argument("--trials", type=int, default=200)
    p_check.add_argument("--seed", default=0, type=int)
    p_check.add_argument(
        "--only",
        action="append",
        metavar="ID[,ID...]",
        help="restrict to these identity ids (repeatable or comma separated)",
    )
    p_check.add_argument("--json", action="store_true", help="one JSON report per line")
    p_check.add_argument(
        "--ops",
        default="standard",
        help=argparse.SUPPRESS,  # mutated primitive bundles, for testing the suite itself
    )
    p_check.set_defaults(func=_cmd_check)

    p_table = sub.add_parser("table", help="tabulate an operation on basis monomials")
    p_table.add_argument("--model", required=True)
    p_table.add_argument("--op", required=True, choices=["product", "bracket", "delta", "cap"])
    p_table.add_argument("--max-degree", type=int, default=6, dest="max_degree")
    p_table.add_argument("--max-exp", type=int, default=4, dest="max_exp",
                         help="bound on total even exponents in listed monomials")
    p_table.add_argument("--unicode", action="store_true")
    p_table.set_defaults(func=_cmd_table)

    p_int = sub.add_parser("intersect", help="loop-intersection calculator")
    p_int.add_argument("--model", required=True)
    p_int.add_argument("--at", default="", help="comma list of base classes met at fixed times")
    p_int.add_argument("--free", default="", help="comma list of base classes met at free times")
    p_int.add_argument("--family", required=True, help="loop-homology class of the family")
    p_int.add_argument("--json", action="store_true")
    p_int.add_argument("--unicode", action="store_true")
    p_int.set_defaults(func=_cmd_intersect)

    p_models = sub.add_parser("models", help="list built-in models")
    p_models.set_defaults(func=_cmd_models)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AlgebraError, ExpressionError) as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
