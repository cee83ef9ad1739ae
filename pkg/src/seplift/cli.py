"""Command-line entry point.

Subcommands take assertion files (``avars:``/``env:`` headers, one assertion
or ``LHS |= RHS`` implication per line) or scenario files, and share budget
flags.  ``--format structured`` emits line-delimited JSON records with stable
keys; text mode is for humans.  Exit codes: 0 for a positive verdict, 1 for a
negative one, 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .heap import format_heap
from .layout import compute_layout, to_dot
from .lifting import (
    CounterexamplePackage,
    NO_GUARANTEE_NOTE,
    chk,
    lift_check,
    verify_package,
    witness_search,
)
from .normalize import format_implication, reduce_implication, to_simple
from .relations import format_relation
from .scenarios import DEMO_NAMES, demo, parse_scenario
from .semantics import (
    SearchBudget,
    ValueDomain,
    env_valid,
    find_counter_env,
    pc_check,
)
from .syntax import ParseError, parse_assertion_file, pretty

_EXIT_OK = 0
_EXIT_NEGATIVE = 1
_EXIT_INPUT = 2


class _Output:
    def __init__(self, mode: str):
        self.mode = mode

    def emit(self, record: dict, text: str) -> None:
        if self.mode == "structured":
            print(json.dumps(record, sort_keys=True, default=str))
        else:
            print(text)


def _budget(args) -> SearchBudget:
    return SearchBudget(
        max_loc=args.locs,
        values=tuple(args.vals),
        max_generators=args.gens,
        max_heap_size=args.heap_size,
    )


def _domain(args) -> ValueDomain:
    return ValueDomain(tuple(args.vals), tuple(range(1, args.locs + 1)))


def _load_assertion_file(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_assertion_file(fh.read())


def _first_implication(path: str):
    doc = _load_assertion_file(path)
    if not doc.implications:
        raise ValueError(f"{path} contains no 'LHS |= RHS' line")
    return doc


def _reduced_family(doc, path: str):
    lhs, rhs = doc.implications[0]
    simple_lhs = to_simple(lhs)
    simple_rhs = to_simple(rhs)
    if simple_lhs is None or simple_rhs is None:
        raise ValueError(f"{path}: implication sides have no simple form")
    return lhs, rhs, reduce_implication(simple_lhs, simple_rhs)


def _package_record(pkg: CounterexamplePackage) -> dict:
    return {
        "instance": format_implication(pkg.form),
        "rho": {name: format_relation(rel) for name, rel in pkg.binary_rho.items()},
        "witness": [format_heap(h) for h in pkg.witness],
        "unary_space": pkg.unary_space,
        "recheck": verify_package(pkg),
    }


def _cmd_parse(args, out: _Output) -> int:
    doc = _load_assertion_file(args.file)
    for a in doc.assertions:
        out.emit({"kind": "assertion", "pretty": pretty(a)}, pretty(a))
    for lhs, rhs in doc.implications:
        text = f"{pretty(lhs)} |= {pretty(rhs)}"
        out.emit({"kind": "implication", "pretty": text}, text)
    return _EXIT_OK


def _cmd_normalize(args, out: _Output) -> int:
    doc = _load_assertion_file(args.file)
    items = list(doc.assertions)
    for lhs, rhs in doc.implications:
        items.extend([lhs, rhs])
    status = _EXIT_OK
    for a in items:
        simple = to_simple(a)
        if simple is None:
            out.emit({"input": pretty(a), "simple": None}, "NOT SIMPLE")
            status = _EXIT_NEGATIVE
        else:
            from .normalize import simple_assertion

            text = pretty(simple_assertion(simple))
            out.emit({"input": pretty(a), "simple": text}, text)
    return status


def _cmd_reduce(args, out: _Output) -> int:
    doc = _first_implication(args.file)
    _, _, family = _reduced_family(doc, args.file)
    for form in family:
        text = format_implication(form)
        out.emit({"member": text}, text)
    return _EXIT_OK


def _cmd_graph(args, out: _Output) -> int:
    doc = _first_implication(args.file)
    _, _, family = _reduced_family(doc, args.file)
    dot = to_dot(compute_layout(family[args.member]))
    if args.out_file:
        with open(args.out_file, "w", encoding="utf-8") as fh:
            fh.write(dot + "\n")
    else:
        print(dot)
    return _EXIT_OK


def _cmd_lift(args, out: _Output) -> int:
    doc = _first_implication(args.file)
    _, _, family = _reduced_family(doc, args.file)
    budget = _budget(args)
    all_lift = True
    undecided = False
    for index, form in enumerate(family):
        verdict = lift_check(form)
        record = {
            "member": format_implication(form),
            "index": index,
            "verdict": verdict.result,
            "criterion": verdict.criterion,
            "balloon_subset": sorted(verdict.balloon_subset or ()),
        }
        text = f"{verdict.describe()}  [{format_implication(form)}]"
        if verdict.result == "no_guarantee":
            all_lift = False
            pkg = witness_search(form, budget)
            if pkg is not None:
                record["package"] = _package_record(pkg)
                text += "\n" + pkg.describe()
            text += "\nnote: " + NO_GUARANTEE_NOTE
        elif verdict.result == "undecided":
            undecided = True
        out.emit(record, text)
    if undecided:
        return _EXIT_NEGATIVE
    return _EXIT_OK if all_lift else _EXIT_NEGATIVE


def _cmd_chk(args, out: _Output) -> int:
    doc = _first_implication(args.file)
    lhs, rhs = doc.implications[0]
    report = chk(lhs, rhs)
    members = [
        {"member": format_implication(f), "verdict": v.result, "criterion": v.criterion}
        for f, v in report.members
    ]
    record = {"chk": report.ok, "reason": report.reason, "members": members}
    lines = [f"CHK: {'true' if report.ok else 'false'} ({report.reason})"]
    for f, v in report.members:
        lines.append(f"  {v.describe()}  [{format_implication(f)}]")
    out.emit(record, "\n".join(lines))
    return _EXIT_OK if report.ok else _EXIT_NEGATIVE


def _cmd_search(args, out: _Output) -> int:
    doc = _first_implication(args.file)
    lhs, rhs = doc.implications[0]
    result = find_counter_env(lhs, rhs, doc.eta, args.arity, _budget(args))
    if result is None:
        out.emit(
            {"arity": args.arity, "counterexample": None},
            f"NONE within budget at arity {args.arity} (not a validity proof)",
        )
        return _EXIT_OK
    record = {
        "arity": args.arity,
        "rho": {n: format_relation(r) for n, r in result.rho.items()},
        "witness": [format_heap(h) for h in result.witness],
    }
    rho_text = ", ".join(f"{n} -> {format_relation(r)}" for n, r in result.rho.items())
    witness = "(" + ", ".join(str(h) for h in result.witness) + ")"
    out.emit(record, f"COUNTEREXAMPLE: {rho_text}; witness {witness}")
    return _EXIT_NEGATIVE


def _cmd_pc(args, out: _Output) -> int:
    doc = _first_implication(args.file)
    _, _, family = _reduced_family(doc, args.file)
    budget = _budget(args)
    dom = _domain(args)
    all_hold = True
    for form in family:
        verdict = pc_check(form, doc.eta, budget, dom)
        record = {
            "member": format_implication(form),
            "holds": verdict.holds,
            "detail": verdict.describe(),
        }
        out.emit(record, f"PC {verdict.describe()}  [{format_implication(form)}]")
        all_hold = all_hold and verdict.holds
    return _EXIT_OK if all_hold else _EXIT_NEGATIVE


def _cmd_prove(args, out: _Output) -> int:
    from .hoare import check_proof

    with open(args.file, encoding="utf-8") as fh:
        scenario = parse_scenario(fh.read())
    verdict = check_proof(
        scenario.gamma, scenario.derivation(), _budget(args), scenario.eta
    )
    record = {
        "accepted": verdict.accepted,
        "node": verdict.node,
        "reason": verdict.reason,
    }
    out.emit(record, verdict.describe())
    return _EXIT_OK if verdict.accepted else _EXIT_NEGATIVE


def _cmd_validity(args, out: _Output) -> int:
    from .hoare import two_validity_test

    with open(args.file, encoding="utf-8") as fh:
        scenario = parse_scenario(fh.read())
    verdict = two_validity_test(
        scenario.gamma,
        scenario.modules(),
        scenario.rho(),
        scenario.eta,
        scenario.pre,
        scenario.client,
        scenario.post,
        _budget(args),
        _domain(args),
    )
    record = {
        "ok": verdict.ok,
        "failed_triple": verdict.failed_triple,
        "violation": verdict.violation.describe() if verdict.violation else None,
        "pairs_checked": verdict.pairs_checked,
    }
    out.emit(record, verdict.describe())
    return _EXIT_OK if verdict.ok else _EXIT_NEGATIVE


def _cmd_demo(args, out: _Output) -> int:
    try:
        report = demo(args.name)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return _EXIT_INPUT
    record = {
        "demo": report.name,
        "ok": report.ok,
        "lines": report.lines,
    }
    out.emit(record, report.text())
    return _EXIT_OK if report.ok else _EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seplift",
        description=(
            "Decide when separation-logic implications with assertion "
            "variables lift from the standard to the relational reading, "
            "search for counterexample environments, and check loop-free "
            "client proofs for representation independence."
        ),
    )
    parser.add_argument("--locs", type=int, default=3, help="location bound (1..N)")
    parser.add_argument(
        "--vals",
        type=lambda s: [int(v) for v in s.split(",") if v.strip()],
        default=[0],
        help="comma-separated cell/quantifier values, e.g. '0,1'",
    )
    parser.add_argument("--gens", type=int, default=2, help="max generators per relation")
    parser.add_argument("--heap-size", type=int, default=1, help="max cells per generator heap")
    parser.add_argument("--arity", type=int, default=2, help="relation arity for search")
    parser.add_argument(
        "--format", choices=("text", "structured"), default="text",
        help="text for humans, structured for line-delimited JSON",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, needs_file=True):
        p = sub.add_parser(name, help=help_text)
        if needs_file:
            p.add_argument("file")
        p.set_defaults(fn=fn)
        return p

    add("parse", _cmd_parse, "parse an assertion file and echo it back")
    add("normalize", _cmd_normalize, "rewrite assertions to simple form or report NOT SIMPLE")
    add("reduce", _cmd_reduce, "reduce an implication to its canonical family")
    g = add("graph", _cmd_graph, "emit the variable-layout graph as DOT")
    g.add_argument("--member", type=int, default=0, help="family member index")
    g.add_argument("--out-file", help="write DOT here instead of stdout")
    add("lift", _cmd_lift, "run the layout lifting criteria; attach a witness package on failure")
    add("chk", _cmd_chk, "two-phase consequence gate: simple form, then criteria on the family")
    add("search", _cmd_search, "search assertion-variable environments for a refutation at --arity")
    add("pc", _cmd_pc, "bounded check of the arity-independent validity condition")
    add("prove", _cmd_prove, "check an annotated client proof from a scenario file")
    add("validity", _cmd_validity, "binary-reading triple check against two implementations")
    d = sub.add_parser("demo", help="run a packaged representation-independence scenario")
    d.add_argument("name", choices=DEMO_NAMES)
    d.set_defaults(fn=_cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output(args.format)
    try:
        return args.fn(args, out)
    except (ParseError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
