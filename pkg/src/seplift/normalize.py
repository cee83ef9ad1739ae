"""Rewriting to simple assertions and implication reduction.

A *simple* assertion is a disjunction of conjunctions of clauses, where each
clause is a variable-free assertion starred with a multiset of assertion
variables.  ``to_simple`` rewrites an arbitrary assertion into that shape
using only equivalences that hold at every arity: distribution of ``*`` over
``\\/`` and over ``EX``, and the distributive lattice laws for ``/\\`` and
``\\/``.  When no such rewrite sequence reaches the shape (e.g. assertion
variables trapped under ``/\\`` inside a ``*``, or under ``ALL``), it returns
None rather than apply anything semantically dubious.

``reduce_implication`` turns an implication between simple assertions into a
finite family of canonical implications (one conjunction of clauses on the
left, one disjunction of clauses on the right) whose joint validity is
equivalent to the original at arities 1 and 2: the right-hand side is put in
conjunctive normal form, the family is the product of left disjuncts and
right CNF clauses, and right-hand clauses mentioning variables absent from
the left are dropped (an empty remainder means the right-hand side is false).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .syntax import (
    And,
    Assertion,
    AVar,
    Exists,
    FalseLit,
    Forall,
    Or,
    Star,
    TrueLit,
    assertion_vars,
    pretty,
    star_all,
)

__all__ = [
    "Clause",
    "SimpleAssertion",
    "ImplicationForm",
    "to_simple",
    "reduce_implication",
    "clause_assertion",
    "simple_assertion",
    "implication_assertions",
    "format_implication",
]


@dataclass(frozen=True)
class Clause:
    """A variable-free base assertion starred with assertion variables."""

    base: Assertion
    avars: tuple[str, ...]  # sorted multiset

    def __post_init__(self):
        if assertion_vars(self.base):
            raise ValueError("clause base must not contain assertion variables")
        object.__setattr__(self, "avars", tuple(sorted(self.avars)))

    def counts(self, variables: tuple[str, ...]) -> tuple[int, ...]:
        return tuple(self.avars.count(v) for v in variables)

    def is_empty(self) -> bool:
        return not self.avars


@dataclass(frozen=True)
class SimpleAssertion:
    """Disjunction of conjunctions of clauses."""

    disjuncts: tuple[tuple[Clause, ...], ...]


@dataclass(frozen=True)
class ImplicationForm:
    """Canonical implication: conjunction of clauses |= disjunction of clauses.

    An empty disjunct tuple denotes a false right-hand side.  Only variables
    occurring on the left may occur on the right.
    """

    conjuncts: tuple[Clause, ...]
    disjuncts: tuple[Clause, ...]

    def __post_init__(self):
        if not self.conjuncts:
            raise ValueError("an implication needs at least one conjunct")
        lhs_vars = set()
        for c in self.conjuncts:
            lhs_vars.update(c.avars)
        for d in self.disjuncts:
            extra = set(d.avars) - lhs_vars
            if extra:
                raise ValueError(
                    f"right-hand side variables {sorted(extra)} missing on the left"
                )

    @property
    def variables(self) -> tuple[str, ...]:
        seen = set()
        for c in self.conjuncts:
            seen.update(c.avars)
        return tuple(sorted(seen))


# --- rewriting to simple form ----------------------------------------------

# During normalization a clause is a (base factors, avars) pair; the base
# factors are folded into a single starred assertion at the end.
_Builder = tuple[tuple[Assertion, ...], tuple[str, ...]]


class _Blowup(Exception):
    pass


def to_simple(phi: Assertion, max_clauses: int = 10_000) -> SimpleAssertion | None:
    try:
        dnf = _norm(phi, max_clauses)
    except _Blowup:
        return None
    if dnf is None:
        return None
    disjuncts = tuple(
        tuple(Clause(star_all(list(bases)), avars) for bases, avars in conj)
        for conj in dnf
    )
    return SimpleAssertion(disjuncts)


def _norm(a: Assertion, limit: int) -> list[list[_Builder]] | None:
    """DNF of `a` as disjuncts -> conjuncts -> builder clauses, or None."""
    if isinstance(a, FalseLit):
        return []
    if isinstance(a, AVar):
        return [[((), (a.name,))]]
    if isinstance(a, Or):
        # Disjunctions split even when variable-free, so that e.g. a
        # disjunctive operand of * gets distributed.
        left = _norm(a.left, limit)
        right = _norm(a.right, limit)
        if left is None or right is None:
            return None
        _check_size(len(left) + len(right), limit)
        return left + right
    if not assertion_vars(a):
        if isinstance(a, TrueLit):
            return [[((), ())]]
        return [[((a,), ())]]
    if isinstance(a, And):
        left = _norm(a.left, limit)
        right = _norm(a.right, limit)
        if left is None or right is None:
            return None
        _check_size(len(left) * len(right), limit)
        return [lc + rc for lc in left for rc in right]
    if isinstance(a, Star):
        left = _norm(a.left, limit)
        right = _norm(a.right, limit)
        if left is None or right is None:
            return None
        # * distributes over \/ but not over /\: each side must contribute a
        # single clause per disjunct.
        out: list[list[_Builder]] = []
        _check_size(len(left) * len(right), limit)
        for lc in left:
            if len(lc) != 1:
                return None
            for rc in right:
                if len(rc) != 1:
                    return None
                (lb, lv), (rb, rv) = lc[0], rc[0]
                out.append([(lb + rb, tuple(sorted(lv + rv)))])
        return out
    if isinstance(a, Exists):
        body = _norm(a.body, limit)
        if body is None or len(body) != 1 or len(body[0]) != 1:
            # Pulling EX out of /\ or \/ is not among the permitted laws.
            return None
        bases, avars = body[0][0]
        # EX x. (base * vars) == (EX x. base) * vars: the variables cannot
        # depend on x, so the quantifier moves onto the base alone.
        return [[((Exists(a.var, star_all(list(bases))),), avars)]]
    if isinstance(a, Forall):
        # * does not distribute over ALL, so variables under ALL are stuck.
        return None
    raise TypeError(f"not an assertion: {a!r}")


def _check_size(n: int, limit: int) -> None:
    if n > limit:
        raise _Blowup


# --- implication reduction --------------------------------------------------


def reduce_implication(
    lhs: SimpleAssertion, rhs: SimpleAssertion, max_family: int = 10_000
) -> list[ImplicationForm]:
    """Reduce a simple implication to its canonical family.

    The family has one member per (left disjunct, right CNF clause) pair; the
    original implication holds at arity 1 or 2 exactly when every member does.
    """
    if not lhs.disjuncts:
        # A false left-hand side: one vacuous member keeps the family honest.
        lhs = SimpleAssertion(((Clause(FalseLit(), ()),),))
    clause_count = 1
    for disjunct in rhs.disjuncts:
        clause_count *= max(len(disjunct), 1)
    if clause_count * len(lhs.disjuncts) > max_family:
        raise ValueError("implication reduction exceeds the family size bound")

    if rhs.disjuncts:
        cnf_clauses = [tuple(choice) for choice in product(*rhs.disjuncts)]
    else:
        cnf_clauses = [()]

    family: list[ImplicationForm] = []
    seen = set()
    for conjuncts in lhs.disjuncts:
        lhs_vars = set()
        for c in conjuncts:
            lhs_vars.update(c.avars)
        for clause in cnf_clauses:
            kept = tuple(d for d in clause if set(d.avars) <= lhs_vars)
            form = ImplicationForm(conjuncts, kept)
            if form not in seen:
                seen.add(form)
                family.append(form)
    return family


# --- conversions back to assertions ----------------------------------------


def clause_assertion(c: Clause) -> Assertion:
    parts: list[Assertion] = [] if isinstance(c.base, TrueLit) else [c.base]
    parts.extend(AVar(v) for v in c.avars)
    return star_all(parts)


def simple_assertion(s: SimpleAssertion) -> Assertion:
    if not s.disjuncts:
        return FalseLit()
    disjuncts = []
    for conj in s.disjuncts:
        node = clause_assertion(conj[0]) if conj else TrueLit()
        for c in conj[1:]:
            node = And(node, clause_assertion(c))
        disjuncts.append(node)
    node = disjuncts[0]
    for d in disjuncts[1:]:
        node = Or(node, d)
    return node


def implication_assertions(form: ImplicationForm) -> tuple[Assertion, Assertion]:
    lhs = clause_assertion(form.conjuncts[0])
    for c in form.conjuncts[1:]:
        lhs = And(lhs, clause_assertion(c))
    if form.disjuncts:
        rhs: Assertion = clause_assertion(form.disjuncts[0])
        for d in form.disjuncts[1:]:
            rhs = Or(rhs, clause_assertion(d))
    else:
        rhs = FalseLit()
    return lhs, rhs


def format_implication(form: ImplicationForm) -> str:
    lhs, rhs = implication_assertions(form)
    return f"{pretty(lhs)} |= {pretty(rhs)}"
