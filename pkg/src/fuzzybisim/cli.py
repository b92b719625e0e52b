"""Command line front end.

Exit codes: 0 success, 1 failed check, 2 bad input, 3 non-convergence.
All JSON output is deterministic: fixed key order, indent=2, sorted
relation entries, exact rational degree strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .automata import lang_degree, parse_automaton
from .errors import InputError, NonConvergenceError
from .fuzzyrel import parse_relation, relation_json_array
from .hmlogic import eval_formula, hm_degree_bounded, parse_formula
from .lattice import by_name, format_degree, parse_degree
from .simrel import (
    bisim_norm,
    check_crisp_bisimulation,
    check_crisp_simulation,
    check_fuzzy_bisimulation,
    check_fuzzy_simulation,
    check_lambda_approx_bisimulation,
    check_lambda_approx_simulation,
    greatest_fuzzy_bisimulation,
    greatest_fuzzy_simulation,
    max_approx_lambda,
    preservation_to_obj,
    report_to_obj,
    sim_norm,
    verify_preservation,
)

_LATTICES = ("godel", "lukasiewicz", "product")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lattice", choices=_LATTICES, default="godel",
                        help="truth structure to compute in (default: godel)")
    common.add_argument("--max-iters", type=int, default=None, metavar="N",
                        help="iteration cap for fixpoint sweeps")
    common.add_argument("--output", choices=("json", "text"), default="json",
                        help="output format (default: json)")

    parser = argparse.ArgumentParser(
        prog="fuzzybisim",
        description="Analyze fuzzy automata: languages, simulations, "
                    "bisimulations, and formula degrees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lang", parents=[common],
                       help="degree of a word in an automaton's language")
    p.add_argument("automaton")
    p.add_argument("--word", required=True,
                   help="comma-separated symbols; empty string for the empty word")

    for cmd, noun in (("check-sim", "simulation"), ("check-bisim", "bisimulation")):
        p = sub.add_parser(cmd, parents=[common],
                           help=f"check whether a relation is a {noun}")
        p.add_argument("automaton")
        p.add_argument("automaton_prime")
        p.add_argument("--relation", required=True, help="relation JSON file")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--crisp", action="store_true",
                           help="require initial-set coverage as well")
        group.add_argument("--lambda", dest="lam", default=None, metavar="DEGREE",
                           help=f"check the degree-lambda relaxation of the {noun} "
                                "conditions (godel lattice only)")

    for cmd, noun in (("greatest-sim", "simulation"), ("greatest-bisim", "bisimulation")):
        p = sub.add_parser(cmd, parents=[common],
                           help=f"compute the greatest fuzzy {noun}")
        p.add_argument("automaton")
        p.add_argument("automaton_prime")

    p = sub.add_parser("norm", parents=[common],
                       help="how far a relation is from covering the initial sets")
    p.add_argument("automaton")
    p.add_argument("automaton_prime")
    p.add_argument("--relation", required=True)
    p.add_argument("--kind", choices=("sim", "bisim"), required=True)

    p = sub.add_parser("verify-preservation", parents=[common],
                       help="check language inequalities implied by a relation, "
                            "over all words up to a length bound")
    p.add_argument("automaton")
    p.add_argument("automaton_prime")
    p.add_argument("--relation", required=True)
    p.add_argument("--kind", choices=("sim", "bisim"), default="sim")
    p.add_argument("--max-len", type=int, required=True, metavar="K")

    p = sub.add_parser("hm-degree", parents=[common],
                       help="per-pair infimum of formula readouts up to a depth")
    p.add_argument("automaton")
    p.add_argument("automaton_prime")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--fragment", choices=("sim", "bisim"), required=True)

    p = sub.add_parser("eval-formula", parents=[common],
                       help="evaluate a formula on every state of an automaton")
    p.add_argument("automaton")
    p.add_argument("--formula", required=True)

    p = sub.add_parser("max-lambda", parents=[common],
                       help="largest lambda admitting a lambda-relaxed relation "
                            "of the chosen kind (godel lattice only)")
    p.add_argument("automaton")
    p.add_argument("automaton_prime")
    p.add_argument("--kind", choices=("sim", "bisim"), required=True)

    return parser


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_automaton(path: str):
    try:
        return parse_automaton(_read_text(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_relation(path: str):
    try:
        return parse_relation(_read_text(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse_word(text: str) -> tuple:
    if text == "":
        return ()
    parts = [part.strip() for part in text.split(",")]
    if any(part == "" for part in parts):
        raise InputError(f"word {text!r} has an empty symbol")
    return tuple(parts)


def _emit(args, obj, text_lines) -> None:
    if args.output == "json":
        print(json.dumps(obj, indent=2))
    else:
        for line in text_lines:
            print(line)


def _cmd_lang(args) -> int:
    lat = by_name(args.lattice)
    aut = _load_automaton(args.automaton)
    degree = lang_degree(lat, aut, _parse_word(args.word))
    _emit(args, format_degree(degree), [format_degree(degree)])
    return 0


def _cmd_check(args, noun: str) -> int:
    lat = by_name(args.lattice)
    a = _load_automaton(args.automaton)
    ap = _load_automaton(args.automaton_prime)
    phi = _load_relation(args.relation)
    lam = None
    if args.lam is not None:
        mode = "lambda"
        lam = parse_degree(args.lam)
        check = (check_lambda_approx_simulation if noun == "simulation"
                 else check_lambda_approx_bisimulation)
        ok = check(lat, a, ap, phi, lam)
    elif args.crisp:
        mode = "crisp"
        check = (check_crisp_simulation if noun == "simulation"
                 else check_crisp_bisimulation)
        ok = check(lat, a, ap, phi)
    else:
        mode = "fuzzy"
        check = (check_fuzzy_simulation if noun == "simulation"
                 else check_fuzzy_bisimulation)
        ok = check(lat, a, ap, phi)
    obj = {"kind": noun, "mode": mode, "ok": ok}
    if lam is not None:
        obj["lambda"] = format_degree(lam)
    verdict = "PASS" if ok else "FAIL"
    _emit(args, obj, [f"{noun} check ({mode}): {verdict}"])
    return 0 if ok else 1


def _cmd_greatest(args, noun: str) -> int:
    lat = by_name(args.lattice)
    a = _load_automaton(args.automaton)
    ap = _load_automaton(args.automaton_prime)
    compute = (greatest_fuzzy_simulation if noun == "simulation"
               else greatest_fuzzy_bisimulation)
    report = compute(lat, a, ap, max_iters=args.max_iters)
    obj = report_to_obj(report)
    lines = [f"greatest fuzzy {noun}",
             f"norm: {format_degree(report.norm)}",
             f"iterations: {report.iterations}",
             f"converged: {str(report.converged).lower()}"]
    for (x, xp), d in report.relation.items():
        lines.append(f"  {x} {xp} {format_degree(d)}")
    _emit(args, obj, lines)
    return 0 if report.converged else 3


def _cmd_norm(args) -> int:
    lat = by_name(args.lattice)
    a = _load_automaton(args.automaton)
    ap = _load_automaton(args.automaton_prime)
    phi = _load_relation(args.relation)
    value = (sim_norm if args.kind == "sim" else bisim_norm)(lat, a, ap, phi)
    _emit(args, format_degree(value), [format_degree(value)])
    return 0


def _cmd_verify_preservation(args) -> int:
    lat = by_name(args.lattice)
    a = _load_automaton(args.automaton)
    ap = _load_automaton(args.automaton_prime)
    phi = _load_relation(args.relation)
    report = verify_preservation(lat, a, ap, phi, args.max_len, kind=args.kind)
    obj = preservation_to_obj(report)
    ok = report.pointwise_ok and report.global_ok
    lines = [f"pointwise: {'PASS' if report.pointwise_ok else 'FAIL'}",
             f"global: {'PASS' if report.global_ok else 'FAIL'}",
             f"exact: {str(report.exact).lower()}"]
    _emit(args, obj, lines)
    return 0 if ok else 1


def _cmd_hm_degree(args) -> int:
    lat = by_name(args.lattice)
    a = _load_automaton(args.automaton)
    ap = _load_automaton(args.automaton_prime)
    rel = hm_degree_bounded(lat, a, ap, args.depth, args.fragment)
    obj = relation_json_array(rel)
    lines = [f"{x} {xp} {format_degree(d)}" for (x, xp), d in rel.items()]
    _emit(args, obj, lines or ["(empty)"])
    return 0


def _cmd_eval_formula(args) -> int:
    lat = by_name(args.lattice)
    aut = _load_automaton(args.automaton)
    formula = parse_formula(args.formula)
    values = eval_formula(lat, aut, formula)
    obj = {x: format_degree(values.degree(x)) for x in aut.states}
    lines = [f"{x}: {format_degree(values.degree(x))}" for x in aut.states]
    _emit(args, obj, lines)
    return 0


def _cmd_max_lambda(args) -> int:
    lat = by_name(args.lattice)
    a = _load_automaton(args.automaton)
    ap = _load_automaton(args.automaton_prime)
    value = max_approx_lambda(lat, a, ap, args.kind, max_iters=args.max_iters)
    _emit(args, format_degree(value), [format_degree(value)])
    return 0


def _run(args) -> int:
    cmd = args.command
    if cmd == "lang":
        return _cmd_lang(args)
    if cmd == "check-sim":
        return _cmd_check(args, "simulation")
    if cmd == "check-bisim":
        return _cmd_check(args, "bisimulation")
    if cmd == "greatest-sim":
        return _cmd_greatest(args, "simulation")
    if cmd == "greatest-bisim":
        return _cmd_greatest(args, "bisimulation")
    if cmd == "norm":
        return _cmd_norm(args)
    if cmd == "verify-preservation":
        return _cmd_verify_preservation(args)
    if cmd == "hm-degree":
        return _cmd_hm_degree(args)
    if cmd == "eval-formula":
        return _cmd_eval_formula(args)
    if cmd == "max-lambda":
        return _cmd_max_lambda(args)
    raise InputError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
