"""Loop-free commands, their semantics, the proof checker, and 2-validity.

Commands call module operations, write heap cells, read-bind cells, sequence,
and branch on heap-independent booleans.  ``skip`` is included as a command
because module implementations need a no-op.  Execution is a total function
into heaps extended with an error outcome ``ERR`` for absent-cell accesses.

Proofs are explicit derivations over the usual rules (module-call and
heap-write axioms, frame, existential, sequencing, conditional) plus a rule
of consequence that is gated twice: the implication must pass ``chk`` (so it
lifts to the relational reading) and a bounded environment search must find
no unary counterexample.  Accordingly ``check_proof`` answers Accepted
relative to the search bound, never unconditionally.

``two_validity_test`` checks the binary reading of triples: one client, two
module implementations, assertion variables interpreted by coupling
relations.  Frames quantify over principal relations only; a violation under
an arbitrary upward-closed frame is witnessed by the principal frame of its
residue pair, so nothing is lost at a given heap bound.  Inputs whose cell
values leave the budget are skipped; outputs are judged against the full
interpretation domain, so couplings should be encoded over a domain closed
under one operation step.  An error outcome on either side is a violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .heap import Heap, compose
from .lifting import chk
from .relations import GenRel, member, tuple_compose, tuple_extends
from .semantics import (
    DEFAULT_BUDGET,
    SearchBudget,
    ValueDomain,
    bounded_heaps,
    find_counter_env,
    interpret,
)
from .syntax import (
    And,
    AssertEnv,
    Assertion,
    BoolAtom,
    Exists,
    Expr,
    PointsTo,
    PointsToAny,
    Star,
    VarRef,
    eval_bool,
    eval_expr,
    free_expr_vars,
    free_vars,
    pretty,
)

__all__ = [
    "Command",
    "Skip",
    "Call",
    "Write",
    "LetRead",
    "SeqCmd",
    "IfCmd",
    "ERR",
    "exec_command",
    "build_modules",
    "command_vars",
    "Triple",
    "Derivation",
    "CallAxiom",
    "WriteAxiom",
    "SkipAxiom",
    "FrameRule",
    "ExistsRule",
    "SeqRule",
    "IfRule",
    "Consequence",
    "conclusion",
    "ProofVerdict",
    "check_proof",
    "Violation",
    "ValidityVerdict",
    "two_validity_test",
]


# --- commands ----------------------------------------------------------------


class Command:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Skip(Command):
    pass


@dataclass(frozen=True, slots=True)
class Call(Command):
    name: str


@dataclass(frozen=True, slots=True)
class Write(Command):
    addr: Expr
    value: Expr


@dataclass(frozen=True, slots=True)
class LetRead(Command):
    var: str
    addr: Expr
    body: Command


@dataclass(frozen=True, slots=True)
class SeqCmd(Command):
    first: Command
    second: Command


@dataclass(frozen=True, slots=True)
class IfCmd(Command):
    cond: BoolAtom
    then_branch: Command
    else_branch: Command


class _ErrType:
    __slots__ = ()

    def __repr__(self) -> str:
        return "ERR"


ERR = _ErrType()

ModuleImpl = Mapping[str, Callable[[Heap], "Heap | _ErrType"]]


def exec_command(
    c: Command,
    eta: Mapping[str, int] | None,
    modules: ModuleImpl,
    h: Heap,
) -> "Heap | _ErrType":
    """Run a command; absent-cell reads and writes yield ERR."""
    eta = dict(eta or {})
    return _exec(c, eta, modules, h)


def _exec(c, eta, modules, h):
    if isinstance(c, Skip):
        return h
    if isinstance(c, Call):
        try:
            op = modules[c.name]
        except KeyError:
            raise KeyError(f"module operation {c.name!r} is not provided") from None
        return op(h)
    if isinstance(c, Write):
        loc = eval_expr(c.addr, eta)
        if loc not in h:
            return ERR
        return h.update(loc, eval_expr(c.value, eta))
    if isinstance(c, LetRead):
        loc = eval_expr(c.addr, eta)
        val = h.get(loc) if loc > 0 else None
        if val is None:
            return ERR
        return _exec(c.body, {**eta, c.var: val}, modules, h)
    if isinstance(c, SeqCmd):
        mid = _exec(c.first, eta, modules, h)
        if mid is ERR:
            return ERR
        return _exec(c.second, eta, modules, mid)
    if isinstance(c, IfCmd):
        branch = c.then_branch if eval_bool(c.cond, eta) else c.else_branch
        return _exec(branch, eta, modules, h)
    raise TypeError(f"not a command: {c!r}")


def build_modules(
    commands: Mapping[str, Command], eta: Mapping[str, int] | None = None
) -> dict[str, Callable[[Heap], "Heap | _ErrType"]]:
    """Heap transformers from operation bodies, run with no module context."""

    def make(cmd: Command):
        return lambda h: exec_command(cmd, eta, {}, h)

    return {name: make(cmd) for name, cmd in commands.items()}


def command_vars(c: Command) -> frozenset[str]:
    """Free normal variables of a command; let-bound variables are not free."""
    if isinstance(c, Skip):
        return frozenset()
    if isinstance(c, Call):
        return frozenset()
    if isinstance(c, Write):
        return free_expr_vars(c.addr) | free_expr_vars(c.value)
    if isinstance(c, LetRead):
        return free_expr_vars(c.addr) | (command_vars(c.body) - {c.var})
    if isinstance(c, SeqCmd):
        return command_vars(c.first) | command_vars(c.second)
    if isinstance(c, IfCmd):
        return (
            free_expr_vars(c.cond.left)
            | free_expr_vars(c.cond.right)
            | command_vars(c.then_branch)
            | command_vars(c.else_branch)
        )
    raise TypeError(f"not a command: {c!r}")


def format_command(c: Command) -> str:
    if isinstance(c, Skip):
        return "skip"
    if isinstance(c, Call):
        return c.name
    if isinstance(c, Write):
        from .syntax import pretty_expr

        return f"[{pretty_expr(c.addr)}] := {pretty_expr(c.value)}"
    if isinstance(c, LetRead):
        from .syntax import pretty_expr

        return f"let {c.var}=[{pretty_expr(c.addr)}] in {format_command(c.body)}"
    if isinstance(c, SeqCmd):
        return f"{format_command(c.first)}; {format_command(c.second)}"
    if isinstance(c, IfCmd):
        from .syntax import pretty_expr

        cond = f"{pretty_expr(c.cond.left)} {c.cond.op} {pretty_expr(c.cond.right)}"
        return (
            f"if {cond} {{ {format_command(c.then_branch)} }} "
            f"else {{ {format_command(c.else_branch)} }}"
        )
    raise TypeError(f"not a command: {c!r}")


# --- triples and derivations --------------------------------------------------


@dataclass(frozen=True)
class Triple:
    pre: Assertion
    name: str
    post: Assertion

    def describe(self) -> str:
        return f"{{{pretty(self.pre)}}} {self.name} {{{pretty(self.post)}}}"


def make_context(triples: list[Triple]) -> tuple[Triple, ...]:
    names = [t.name for t in triples]
    if len(set(names)) != len(names):
        raise ValueError("module operation names in a context must be distinct")
    return tuple(triples)


class Derivation:
    __slots__ = ()


@dataclass(frozen=True)
class CallAxiom(Derivation):
    pre: Assertion
    name: str
    post: Assertion


@dataclass(frozen=True)
class WriteAxiom(Derivation):
    addr: Expr
    value: Expr


@dataclass(frozen=True)
class SkipAxiom(Derivation):
    assertion: Assertion


@dataclass(frozen=True)
class FrameRule(Derivation):
    body: Derivation
    frame: Assertion


@dataclass(frozen=True)
class ExistsRule(Derivation):
    body: Derivation
    var: str


@dataclass(frozen=True)
class SeqRule(Derivation):
    first: Derivation
    second: Derivation


@dataclass(frozen=True)
class IfRule(Derivation):
    cond: BoolAtom
    then_branch: Derivation
    else_branch: Derivation


@dataclass(frozen=True)
class Consequence(Derivation):
    """Strengthen the pre and weaken the post, both gated by chk."""

    pre: Assertion
    body: Derivation
    post: Assertion


def conclusion(d: Derivation) -> tuple[Assertion, Command, Assertion]:
    """The (pre, command, post) a derivation claims, ignoring side conditions."""
    if isinstance(d, CallAxiom):
        return d.pre, Call(d.name), d.post
    if isinstance(d, WriteAxiom):
        return PointsToAny(d.addr), Write(d.addr, d.value), PointsTo(d.addr, d.value)
    if isinstance(d, SkipAxiom):
        return d.assertion, Skip(), d.assertion
    if isinstance(d, FrameRule):
        pre, cmd, post = conclusion(d.body)
        return Star(pre, d.frame), cmd, Star(post, d.frame)
    if isinstance(d, ExistsRule):
        pre, cmd, post = conclusion(d.body)
        return Exists(d.var, pre), cmd, Exists(d.var, post)
    if isinstance(d, SeqRule):
        pre1, cmd1, _ = conclusion(d.first)
        _, cmd2, post2 = conclusion(d.second)
        return pre1, SeqCmd(cmd1, cmd2), post2
    if isinstance(d, IfRule):
        pre_then, cmd_then, post = conclusion(d.then_branch)
        _, cmd_else, _ = conclusion(d.else_branch)
        base_pre = pre_then.left if isinstance(pre_then, And) else pre_then
        return base_pre, IfCmd(d.cond, cmd_then, cmd_else), post
    if isinstance(d, Consequence):
        _, cmd, _ = conclusion(d.body)
        return d.pre, cmd, d.post
    raise TypeError(f"not a derivation: {d!r}")


@dataclass(frozen=True)
class ProofVerdict:
    accepted: bool
    node: str | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.accepted

    def describe(self) -> str:
        if self.accepted:
            return "Accepted (relative to the search bound)"
        return f"Rejected at {self.node}: {self.reason}"


class _Reject(Exception):
    def __init__(self, node: str, reason: str):
        super().__init__(reason)
        self.node = node
        self.reason = reason


def check_proof(
    gamma: tuple[Triple, ...],
    d: Derivation,
    budget: SearchBudget = DEFAULT_BUDGET,
    eta: Mapping[str, int] | None = None,
) -> ProofVerdict:
    """Verify every rule instance of a derivation.

    Structural rules are checked syntactically.  Consequence premises are
    checked by chk plus a bounded unary environment search, so acceptance is
    always relative to that bound.  Rejection pinpoints the first failing
    node in depth-first order.
    """
    try:
        _check(gamma, d, budget, eta, "root")
    except _Reject as r:
        return ProofVerdict(False, r.node, r.reason)
    return ProofVerdict(True)


def _check(gamma, d, budget, eta, path) -> tuple[Assertion, Command, Assertion]:
    if isinstance(d, CallAxiom):
        if not any(
            t.name == d.name and t.pre == d.pre and t.post == d.post for t in gamma
        ):
            raise _Reject(path, f"no context triple matches {d.name}")
        return conclusion(d)
    if isinstance(d, (WriteAxiom, SkipAxiom)):
        return conclusion(d)
    if isinstance(d, FrameRule):
        _check(gamma, d.body, budget, eta, path + ".frame")
        return conclusion(d)
    if isinstance(d, ExistsRule):
        _, cmd, _ = _check(gamma, d.body, budget, eta, path + ".exists")
        if d.var in command_vars(cmd):
            raise _Reject(path, f"{d.var} occurs free in the command")
        return conclusion(d)
    if isinstance(d, SeqRule):
        _, _, post1 = _check(gamma, d.first, budget, eta, path + ".seq1")
        pre2, _, _ = _check(gamma, d.second, budget, eta, path + ".seq2")
        if post1 != pre2:
            raise _Reject(
                path,
                f"sequencing mismatch: {pretty(post1)} vs {pretty(pre2)}",
            )
        return conclusion(d)
    if isinstance(d, IfRule):
        pre_t, cmd_t, post_t = _check(gamma, d.then_branch, budget, eta, path + ".then")
        pre_e, cmd_e, post_e = _check(gamma, d.else_branch, budget, eta, path + ".else")
        if post_t != post_e:
            raise _Reject(path, "branch postconditions differ")
        if not (
            isinstance(pre_t, And)
            and isinstance(pre_e, And)
            and pre_t.left == pre_e.left
            and pre_t.right == d.cond
            and pre_e.right == d.cond.negated()
        ):
            raise _Reject(path, "branch preconditions do not split on the guard")
        return conclusion(d)
    if isinstance(d, Consequence):
        pre_in, _, post_in = _check(gamma, d.body, budget, eta, path + ".body")
        _check_implication(d.pre, pre_in, budget, eta, path + ".pre")
        _check_implication(post_in, d.post, budget, eta, path + ".post")
        return conclusion(d)
    raise _Reject(path, f"unknown derivation node {type(d).__name__}")


def _check_implication(lhs, rhs, budget, eta, path):
    report = chk(lhs, rhs)
    if not report:
        raise _Reject(
            path,
            f"chk failed for {pretty(lhs)} |= {pretty(rhs)}: {report.reason}",
        )
    counter = find_counter_env(lhs, rhs, eta, 1, budget)
    if counter is not None:
        raise _Reject(
            path,
            f"bounded unary search refuted {pretty(lhs)} |= {pretty(rhs)}",
        )


# --- 2-validity ----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    location: str  # a module operation name, or "client"
    inputs: tuple[Heap, Heap]
    frame: tuple[Heap, Heap]
    outputs: tuple  # Heap or ERR on each side
    reason: str

    def describe(self) -> str:
        out1, out2 = self.outputs
        return (
            f"{self.location}: inputs ({self.inputs[0]}, {self.inputs[1]}) with "
            f"frame ({self.frame[0]}, {self.frame[1]}) produced "
            f"({out1}, {out2}): {self.reason}"
        )


@dataclass(frozen=True)
class ValidityVerdict:
    ok: bool
    violation: Violation | None = None
    failed_triple: str | None = None  # which context triple broke, if any
    pairs_checked: int = 0

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"NoViolation (bounded; {self.pairs_checked} input/frame pairs)"
        prefix = (
            f"context triple {self.failed_triple!r} does not preserve the coupling"
            if self.failed_triple
            else "client violation"
        )
        return f"{prefix}: {self.violation.describe()}"


def two_validity_test(
    gamma: tuple[Triple, ...],
    impls: tuple[ModuleImpl, ModuleImpl],
    rho: AssertEnv,
    eta: Mapping[str, int] | None,
    pre: Assertion,
    client: Command,
    post: Assertion,
    budget: SearchBudget = DEFAULT_BUDGET,
    dom: ValueDomain | None = None,
) -> ValidityVerdict:
    """Binary reading of triples against two module implementations.

    First every context triple is checked (the modules must preserve the
    couplings), then the client triple.  Inputs are the generator pairs of
    the precondition whose cells stay within the budget, extended with every
    pair of principal frames within the budget; outputs must land in the
    postcondition starred with the same frame.
    """
    if rho.arity != 2:
        raise ValueError("two_validity_test needs a binary environment")
    dom = dom or budget.domain()
    impl1, impl2 = impls
    total = 0
    for triple in gamma:
        if triple.name not in impl1 or triple.name not in impl2:
            raise KeyError(f"both implementations must provide {triple.name!r}")
        run1, run2 = impl1[triple.name], impl2[triple.name]
        violation, checked = _check_binary_triple(
            triple.name, triple.pre, run1, run2, triple.post, rho, eta, budget, dom
        )
        total += checked
        if violation is not None:
            return ValidityVerdict(False, violation, triple.name, total)
    run1 = lambda h: exec_command(client, eta, impl1, h)
    run2 = lambda h: exec_command(client, eta, impl2, h)
    violation, checked = _check_binary_triple(
        "client", pre, run1, run2, post, rho, eta, budget, dom
    )
    total += checked
    if violation is not None:
        return ValidityVerdict(False, violation, None, total)
    return ValidityVerdict(True, None, None, total)


def _within_budget(h: Heap, budget: SearchBudget) -> bool:
    return all(
        1 <= loc <= budget.max_loc and val in budget.values for loc, val in h.cells
    )


def _check_binary_triple(
    location, pre, run1, run2, post, rho, eta, budget, dom
):
    pre_rel = interpret(pre, eta, rho, 2, dom)
    post_rel = interpret(post, eta, rho, 2, dom)
    frames = bounded_heaps(budget.max_loc, budget.values)
    checked = 0
    for g1, g2 in pre_rel.sorted_generators():
        if not (_within_budget(g1, budget) and _within_budget(g2, budget)):
            continue
        frames1 = [f for f in frames if compose(g1, f) is not None]
        frames2 = [f for f in frames if compose(g2, f) is not None]
        for f0 in frames1:
            f = compose(g1, f0)
            for g0 in frames2:
                g = compose(g2, g0)
                checked += 1
                out1 = run1(f)
                out2 = run2(g)
                if out1 is ERR or out2 is ERR:
                    return (
                        Violation(
                            location, (f, g), (f0, g0), (out1, out2),
                            "execution faulted",
                        ),
                        checked,
                    )
                if not _in_post_with_frame(post_rel, (f0, g0), (out1, out2)):
                    return (
                        Violation(
                            location, (f, g), (f0, g0), (out1, out2),
                            "outputs leave the postcondition with this frame",
                        ),
                        checked,
                    )
    return None, checked


def _in_post_with_frame(post_rel: GenRel, frame, outputs) -> bool:
    for gen in post_rel.generators:
        combined = tuple_compose(gen, frame)
        if combined is not None and tuple_extends(combined, outputs):
            return True
    return False
