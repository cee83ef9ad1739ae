"""Scenario files and packaged demonstration scenarios.

A scenario bundles an interface context, two module implementations, coupling
relations for the assertion variables, a client with pre/postconditions, and
an annotated client proof.  The file format is line-oriented::

    avars: a, b
    env: x=0                      # optional
    context:
      {1|->_} init {a}
      {a} inc {a}
    impl1:
      init: [1] := 0
      inc: let y=[1] in [1] := y+1
    impl2:
      ...
    coupling:
      a: { ([1|->0],[1|->0]), ([1|->1],[1|->1]) }
    client: init; inc
    pre: 1|->_
    post: 1|->_
    proof:
      {1|->_}
      init
      {a}
      inc
      {a}

Proofs are straight lines of commands with an assertion between every two
statements; two consecutive assertion lines mark a consequence step.  The
builder assembles the corresponding derivation; richer derivations (frame,
existential, conditional) are built programmatically.

The two packaged demos exercise representation independence end to end: a
two-stage counter whose implementations store the count directly or with a
stage-dependent sign, and a good/bad client pair where only the proof that
passes the consequence gate yields indistinguishable runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .heap import Heap
from .hoare import (
    Call,
    CallAxiom,
    Command,
    Consequence,
    Derivation,
    ERR,
    IfCmd,
    LetRead,
    SeqCmd,
    SeqRule,
    Skip,
    SkipAxiom,
    Triple,
    ValidityVerdict,
    ProofVerdict,
    Write,
    WriteAxiom,
    build_modules,
    check_proof,
    conclusion,
    exec_command,
    make_context,
    two_validity_test,
)
from .relations import GenRel, parse_relation
from .semantics import SearchBudget, ValueDomain
from .syntax import (
    Add,
    AssertEnv,
    Assertion,
    BoolAtom,
    IntLit,
    Neg,
    ParseError,
    PointsTo,
    PointsToAny,
    SubExpr,
    VarRef,
    _Parser,
    parse,
    pretty,
)

__all__ = [
    "Scenario",
    "parse_scenario",
    "parse_command",
    "build_annotated_proof",
    "DemoReport",
    "demo",
    "DEMO_NAMES",
    "counter_scenario",
    "goodbad_scenario",
]


# --- command parsing -----------------------------------------------------------


class _CommandParser(_Parser):
    def command(self) -> Command:
        node = self.statement()
        while self.peek().text == ";":
            self.advance()
            if self.peek().kind == "eof":
                break  # tolerate a trailing semicolon
            node = SeqCmd(node, self.statement())
        return node

    def statement(self) -> Command:
        tok = self.peek()
        if tok.text == "skip":
            self.advance()
            return Skip()
        if tok.text == "{":
            self.advance()
            node = self.command()
            self.expect("}")
            return node
        if tok.text == "[":
            self.advance()
            addr = self.expr()
            self.expect("]")
            self.expect(":=")
            return Write(addr, self.expr())
        if tok.text == "let":
            self.advance()
            name = self.advance()
            if name.kind != "ident":
                raise self.error("expected a variable after 'let'")
            self.expect("=")
            self.expect("[")
            addr = self.expr()
            self.expect("]")
            self.expect("in")
            return LetRead(name.text, addr, self.statement())
        if tok.text == "if":
            self.advance()
            left = self.expr()
            op = self.advance()
            if op.text not in ("=", "!=", "<", "<=", ">", ">="):
                raise self.error("expected a comparison in the guard")
            cond = BoolAtom(op.text, left, self.expr())
            self.expect("{")
            then_branch = self.command()
            self.expect("}")
            self.expect("else")
            self.expect("{")
            else_branch = self.command()
            self.expect("}")
            return IfCmd(cond, then_branch, else_branch)
        if tok.kind == "ident":
            self.advance()
            return Call(tok.text)
        raise self.error("expected a command")


def parse_command(text: str) -> Command:
    parser = _CommandParser(text, frozenset())
    node = parser.command()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError("trailing input after command", tok.pos, text)
    return node


# --- annotated straight-line proofs ---------------------------------------------


ProofLine = tuple[str, object]  # ("assert", Assertion) | ("cmd", Command)


def parse_proof_lines(lines: list[str], avars: frozenset[str]) -> list[ProofLine]:
    out: list[ProofLine] = []
    for line in lines:
        stripped = line.strip().rstrip(";").strip()
        if not stripped:
            continue
        if stripped.startswith("{"):
            if not stripped.endswith("}"):
                raise ValueError(f"assertion line must be braced: {line!r}")
            out.append(("assert", parse(stripped[1:-1], avars)))
        else:
            out.append(("cmd", parse_command(stripped)))
    return out


def build_annotated_proof(
    gamma: tuple[Triple, ...], lines: list[ProofLine]
) -> Derivation:
    """Assemble a derivation from an annotated straight-line program.

    Every command needs an assertion before and after it; consecutive
    assertions become consequence steps.  Module calls must match their
    context triple exactly (insert a consequence line otherwise); writes must
    match the heap-write axiom; skip needs equal assertions around it.
    """
    if not lines or lines[0][0] != "assert":
        raise ValueError("a proof starts with an assertion line")
    current: Assertion = lines[0][1]
    derivation: Derivation | None = None
    i = 1
    while i < len(lines):
        hops: list[Assertion] = []
        while i < len(lines) and lines[i][0] == "assert":
            hops.append(lines[i][1])
            i += 1
        if i == len(lines):
            if derivation is None:
                raise ValueError("a proof needs at least one command")
            for target in hops:
                pre, _, _ = conclusion(derivation)
                derivation = Consequence(pre, derivation, target)
            return derivation
        cmd = lines[i][1]
        i += 1
        if i == len(lines) or lines[i][0] != "assert":
            raise ValueError("every command needs an assertion after it")
        post = lines[i][1]
        i += 1
        step_pre = hops[-1] if hops else current
        step = _axiom_step(gamma, step_pre, cmd, post)
        for hop_source in reversed([current, *hops[:-1]]):
            step = Consequence(hop_source, step, post)
        derivation = step if derivation is None else SeqRule(derivation, step)
        current = post
    if derivation is None:
        raise ValueError("a proof needs at least one command")
    return derivation


def _axiom_step(gamma, pre, cmd, post) -> Derivation:
    if isinstance(cmd, Call):
        for t in gamma:
            if t.name == cmd.name:
                if t.pre == pre and t.post == post:
                    return CallAxiom(pre, cmd.name, post)
                raise ValueError(
                    f"call {cmd.name}: annotations {{{pretty(pre)}}}..{{{pretty(post)}}} "
                    f"do not match the context triple {t.describe()}; "
                    "add a consequence assertion line"
                )
        raise ValueError(f"no context triple for operation {cmd.name!r}")
    if isinstance(cmd, Write):
        if pre == PointsToAny(cmd.addr) and post == PointsTo(cmd.addr, cmd.value):
            return WriteAxiom(cmd.addr, cmd.value)
        raise ValueError(
            "a write step must be annotated with the heap-write axiom shape"
        )
    if isinstance(cmd, Skip):
        if pre == post:
            return SkipAxiom(pre)
        raise ValueError("skip cannot change the assertion")
    raise ValueError(
        f"only calls, writes and skip are allowed in annotated proofs, "
        f"got {type(cmd).__name__}"
    )


# --- scenario files --------------------------------------------------------------


@dataclass
class Scenario:
    avars: frozenset[str]
    eta: dict[str, int]
    gamma: tuple[Triple, ...]
    impl1: dict[str, Command]
    impl2: dict[str, Command]
    coupling: dict[str, GenRel]
    client: Command
    pre: Assertion
    post: Assertion
    proof: list[ProofLine]

    def rho(self) -> AssertEnv:
        return AssertEnv(2, self.coupling)

    def modules(self) -> tuple[dict, dict]:
        return build_modules(self.impl1, self.eta), build_modules(self.impl2, self.eta)

    def derivation(self) -> Derivation:
        return build_annotated_proof(self.gamma, self.proof)


_SECTIONS = (
    "avars",
    "env",
    "context",
    "impl1",
    "impl2",
    "coupling",
    "client",
    "pre",
    "post",
    "proof",
)


def parse_scenario(text: str) -> Scenario:
    sections: dict[str, list[str]] = {name: [] for name in _SECTIONS}
    current: str | None = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        head, _, tail = line.partition(":")
        key = head.strip()
        if key in _SECTIONS and (head == line or not line.startswith(" ")):
            current = key
            if tail.strip():
                sections[current].append(tail.strip())
            continue
        if current is None:
            raise ValueError(f"content before any section header: {raw!r}")
        sections[current].append(line.strip())

    avars = frozenset(
        name.strip()
        for chunk in sections["avars"]
        for name in chunk.split(",")
        if name.strip()
    )
    eta: dict[str, int] = {}
    for chunk in sections["env"]:
        for binding in chunk.split(","):
            if binding.strip():
                name, _, value = binding.partition("=")
                eta[name.strip()] = int(value.strip())

    gamma = make_context(
        [_parse_triple(line, avars) for line in sections["context"]]
    )
    impl1 = _parse_impl(sections["impl1"])
    impl2 = _parse_impl(sections["impl2"])
    coupling = {}
    for line in sections["coupling"]:
        name, _, literal = line.partition(":")
        coupling[name.strip()] = parse_relation(literal.strip(), arity=2)
    client = parse_command(" ".join(sections["client"]))
    pre = parse(" ".join(sections["pre"]), avars)
    post = parse(" ".join(sections["post"]), avars)
    proof = parse_proof_lines(sections["proof"], avars)
    return Scenario(
        avars, eta, gamma, impl1, impl2, coupling, client, pre, post, proof
    )


def _parse_triple(line: str, avars: frozenset[str]) -> Triple:
    stripped = line.strip()
    if not stripped.startswith("{"):
        raise ValueError(f"triple must start with an assertion: {line!r}")
    pre_end = stripped.index("}")
    pre = parse(stripped[1:pre_end], avars)
    rest = stripped[pre_end + 1 :].strip()
    name, _, post_part = rest.partition("{")
    post_part = post_part.strip()
    if not post_part.endswith("}"):
        raise ValueError(f"triple must end with an assertion: {line!r}")
    return Triple(pre, name.strip(), parse(post_part[:-1], avars))


def _parse_impl(lines: list[str]) -> dict[str, Command]:
    impl: dict[str, Command] = {}
    for line in lines:
        name, _, body = line.partition(":")
        impl[name.strip()] = parse_command(body.strip())
    return impl


# --- packaged demos ---------------------------------------------------------------


def _relation_domain(values: tuple[int, ...]) -> tuple[int, ...]:
    """Close a value set under one step of +1, -1 and negation.

    Couplings are encoded over this larger domain so that a module operation
    applied to an in-budget input cannot fall off the encoding and produce a
    spurious violation.
    """
    out = set(values)
    for v in values:
        out.update((v + 1, v - 1, -v))
    return tuple(sorted(out))


def _equal_value_coupling(values: tuple[int, ...], negate: bool) -> GenRel:
    return GenRel(
        2,
        [
            (Heap({1: v}), Heap({1: -v if negate else v}))
            for v in values
        ],
    )


def counter_scenario(
    values: tuple[int, ...] = (-2, -1, 0, 1, 2)
) -> tuple[Scenario, SearchBudget, ValueDomain]:
    """Two-stage counter: increment-only stage, then decrement-only stage.

    Both implementations keep their state in cell 1; the second one stores
    the negated count while in the second stage.  The couplings say: equal
    stored values in the first stage, negated values in the second.
    """
    avars = frozenset({"a", "b"})
    arrow = parse("1 |-> _")
    a, b = parse("a", avars), parse("b", avars)
    gamma = make_context(
        [
            Triple(arrow, "init", a),
            Triple(a, "inc", a),
            Triple(a, "nxt", b),
            Triple(b, "dec", b),
            Triple(b, "fin", arrow),
        ]
    )
    one = IntLit(1)
    y = VarRef("y")
    impl1 = {
        "init": Write(one, IntLit(0)),
        "inc": LetRead("y", one, Write(one, Add(y, IntLit(1)))),
        "nxt": Skip(),
        "dec": LetRead("y", one, Write(one, SubExpr(y, IntLit(1)))),
        "fin": Skip(),
    }
    impl2 = {
        "init": Write(one, IntLit(0)),
        "inc": LetRead("y", one, Write(one, Add(y, IntLit(1)))),
        "nxt": LetRead("y", one, Write(one, Neg(y))),
        "dec": LetRead("y", one, Write(one, Add(y, IntLit(1)))),
        "fin": LetRead("y", one, Write(one, Neg(y))),
    }
    rel_values = _relation_domain(values)
    coupling = {
        "a": _equal_value_coupling(rel_values, negate=False),
        "b": _equal_value_coupling(rel_values, negate=True),
    }
    client = parse_command("init; inc; nxt; dec; fin")
    proof = parse_proof_lines(
        ["{1|->_}", "init", "{a}", "inc", "{a}", "nxt", "{b}", "dec", "{b}", "fin", "{1|->_}"],
        avars,
    )
    scenario = Scenario(
        avars, {}, gamma, impl1, impl2, coupling, client, arrow, arrow, proof
    )
    budget = SearchBudget(max_loc=3, values=values)
    dom = ValueDomain(values=rel_values, locations=(1, 2, 3))
    return scenario, budget, dom


def goodbad_scenario(
    values: tuple[int, ...] = (0, 1, 2)
) -> tuple[Scenario, Scenario, SearchBudget, ValueDomain]:
    """A good and a bad client over the same module.

    init leaves the heap alone but abstracts it into two assertion variables;
    fin accepts a plain cell.  badfin's interface assumes one of the variables
    owns the cell outright, which the couplings deny: its precondition has an
    empty binary meaning, so the modules preserve the couplings vacuously,
    yet the bad client's runs end with different cell values.  Returns the
    good scenario, the bad scenario, and the budget/domain to test them at.
    """
    avars = frozenset({"a", "b"})
    arrow = parse("1 |-> _")
    init_post = parse("1|->_ /\\ a*b", avars)
    badfin_pre = parse("1|->_ * a \\/ 1|->_ * b", avars)
    gamma = make_context(
        [
            Triple(arrow, "init", init_post),
            Triple(arrow, "fin", arrow),
            Triple(badfin_pre, "badfin", arrow),
        ]
    )
    one = IntLit(1)
    impl1 = {"init": Skip(), "fin": Skip(), "badfin": Write(one, IntLit(1))}
    impl2 = {"init": Skip(), "fin": Skip(), "badfin": Write(one, IntLit(2))}
    coupling = {
        "a": GenRel(2, [(Heap({1: v}), Heap()) for v in values]),
        "b": GenRel(2, [(Heap(), Heap({1: v})) for v in values]),
    }
    good_proof = parse_proof_lines(
        ["{1|->_}", "init", "{1|->_ /\\ a*b}", "{1|->_}", "fin", "{1|->_}"], avars
    )
    bad_proof = parse_proof_lines(
        [
            "{1|->_}",
            "init",
            "{1|->_ /\\ a*b}",
            "{1|->_ * a \\/ 1|->_ * b}",
            "badfin",
            "{1|->_}",
        ],
        avars,
    )
    good = Scenario(
        avars, {}, gamma, impl1, impl2, coupling,
        parse_command("init; fin"), arrow, arrow, good_proof,
    )
    bad = Scenario(
        avars, {}, gamma, impl1, impl2, coupling,
        parse_command("init; badfin"), arrow, arrow, bad_proof,
    )
    budget = SearchBudget(max_loc=3, values=values)
    dom = ValueDomain(values=values, locations=(1, 2, 3))
    return good, bad, budget, dom


@dataclass
class DemoReport:
    name: str
    ok: bool
    lines: list[str]
    proof_verdicts: dict[str, ProofVerdict]
    validity_verdicts: dict[str, ValidityVerdict]

    def text(self) -> str:
        status = "OK" if self.ok else "MISMATCH"
        return "\n".join([f"demo {self.name}: {status}", *["  " + l for l in self.lines]])


DEMO_NAMES = ("counter", "goodbad")


def demo(name: str) -> DemoReport:
    """Run a packaged representation-independence scenario end to end."""
    if name == "counter":
        return _demo_counter()
    if name == "goodbad":
        return _demo_goodbad()
    raise ValueError(f"unknown demo {name!r}; available: {', '.join(DEMO_NAMES)}")


def _demo_counter() -> DemoReport:
    scenario, budget, dom = counter_scenario()
    lines = [
        "two-stage counter; couplings: equal values in stage one, "
        "negated values in stage two",
    ]
    proof = check_proof(scenario.gamma, scenario.derivation(), budget, scenario.eta)
    lines.append(f"client proof: {proof.describe()}")
    validity = two_validity_test(
        scenario.gamma,
        scenario.modules(),
        scenario.rho(),
        scenario.eta,
        scenario.pre,
        scenario.client,
        scenario.post,
        budget,
        dom,
    )
    lines.append(f"binary validity: {validity.describe()}")
    mods1, mods2 = scenario.modules()
    runs_equal = True
    for v in budget.values:
        start = Heap({1: v})
        out1 = exec_command(scenario.client, scenario.eta, mods1, start)
        out2 = exec_command(scenario.client, scenario.eta, mods2, start)
        same = out1 is not ERR and out2 is not ERR and out1.get(1) == out2.get(1)
        runs_equal = runs_equal and same
        lines.append(
            f"start [1|->{v}]: implementations end with cell 1 = "
            f"{out1 if out1 is ERR else out1.get(1)} and "
            f"{out2 if out2 is ERR else out2.get(1)}"
        )
    ok = bool(proof) and bool(validity) and runs_equal
    return DemoReport(
        "counter", ok, lines, {"client": proof}, {"client": validity}
    )


def _demo_goodbad() -> DemoReport:
    good, bad, budget, dom = goodbad_scenario()
    lines = ["good client uses fin; bad client uses badfin"]
    verdicts_p: dict[str, ProofVerdict] = {}
    verdicts_v: dict[str, ValidityVerdict] = {}
    results = {}
    for label, scenario in (("good", good), ("bad", bad)):
        proof = check_proof(scenario.gamma, scenario.derivation(), budget, scenario.eta)
        validity = two_validity_test(
            scenario.gamma,
            scenario.modules(),
            scenario.rho(),
            scenario.eta,
            scenario.pre,
            scenario.client,
            scenario.post,
            budget,
            dom,
        )
        verdicts_p[label] = proof
        verdicts_v[label] = validity
        results[label] = (proof, validity)
        lines.append(f"{label} proof: {proof.describe()}")
        lines.append(f"{label} validity: {validity.describe()}")
    mods1, mods2 = bad.modules()
    start = Heap({1: 0})
    out1 = exec_command(bad.client, bad.eta, mods1, start)
    out2 = exec_command(bad.client, bad.eta, mods2, start)
    lines.append(
        f"bad client runs from [1|->0]: final heaps {out1} vs {out2}"
    )
    good_ok = bool(results["good"][0]) and bool(results["good"][1])
    bad_rejected = not results["bad"][0] and not results["bad"][1]
    distinguishes = (
        out1 is not ERR and out2 is not ERR and out1.get(1) != out2.get(1)
    )
    ok = good_ok and bad_rejected and distinguishes
    return DemoReport("goodbad", ok, lines, verdicts_p, verdicts_v)
