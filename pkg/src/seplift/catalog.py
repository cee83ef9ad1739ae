"""Curated implication instances exercising the lifting criteria.

Each entry is a concrete canonical implication with an expected verdict.  The
instances marked as lifting are unary valid, so the soundness cross-check can
insist that no binary counterexample exists within budget; the no-guarantee
entries have layouts for which a witness package must be constructible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .normalize import Clause, ImplicationForm
from .syntax import parse

__all__ = ["SuiteEntry", "make_form", "CURATED_SUITE"]


@dataclass(frozen=True)
class SuiteEntry:
    name: str
    form: ImplicationForm
    expected: str  # "lifts" | "no_guarantee"
    criterion: str | None = None
    balloon_subset: frozenset[str] | None = None


def make_form(
    conjuncts: list[tuple[str, str]], disjuncts: list[tuple[str, str]]
) -> ImplicationForm:
    """Build a canonical implication from (base text, variable list) pairs."""

    def clause(base_text: str, var_text: str) -> Clause:
        return Clause(parse(base_text), tuple(var_text.split()))

    return ImplicationForm(
        tuple(clause(b, v) for b, v in conjuncts),
        tuple(clause(b, v) for b, v in disjuncts),
    )


CURATED_SUITE: tuple[SuiteEntry, ...] = (
    # Layouts accepted by a criterion; every instance below is unary valid.
    SuiteEntry(
        "shadow-two-stage",
        make_form([("true", "a b"), ("true", "a b b")],
                  [("true", "a b b"), ("true", "b b")]),
        "lifts", "shadow",
    ),
    SuiteEntry(
        "shadow-with-cell",
        make_form([("1|->_", "a b"), ("true", "a b b")],
                  [("true", "a b b"), ("true", "b b")]),
        "lifts", "shadow",
    ),
    SuiteEntry(
        "shadow-disjoint-singles",
        make_form([("true", "a"), ("true", "b")],
                  [("true", "a"), ("true", "b")]),
        "lifts", "shadow",
    ),
    SuiteEntry(
        "shadow-identical-triples",
        make_form([("true", "a b b"), ("true", "a b b")],
                  [("true", "a b b")]),
        "lifts", "shadow",
    ),
    SuiteEntry(
        "shadow-doubled-var",
        make_form([("true", "a a")], [("true", "a a")]),
        "lifts", "shadow",
    ),
    SuiteEntry(
        "shadow-three-conjuncts",
        make_form([("true", "c"), ("true", "c"), ("true", "c")],
                  [("true", "c")]),
        "lifts", "shadow",
    ),
    SuiteEntry(
        "shadow-nonempty-base",
        make_form([("-", "a")], [("true", "a")]),
        "lifts", "shadow",
    ),
    SuiteEntry(
        "shadow-lonely-drop",
        make_form([("2|->_", "a a b")], [("true", "a b")]),
        "lifts", "shadow",
    ),
    SuiteEntry(
        "balloon-two-stage",
        make_form([("true", "a"), ("true", "a b")],
                  [("true", "a b"), ("true", "")]),
        "lifts", "balloon", frozenset({"b"}),
    ),
    SuiteEntry(
        "balloon-nonempty-bases",
        make_form([("-", "a"), ("-", "a b")],
                  [("-", "a b"), ("-", "")]),
        "lifts", "balloon", frozenset({"b"}),
    ),
    SuiteEntry(
        "balloon-empty-rhs",
        make_form([("1|->_", "a b")], [("true", "")]),
        "lifts", "balloon", frozenset(),
    ),
    SuiteEntry(
        "balloon-single-pick",
        make_form([("true", "a b")], [("true", "a b"), ("true", "")]),
        "lifts", "balloon", frozenset({"a"}),
    ),
    SuiteEntry(
        "balloon-variable-free",
        make_form([("1|->_", "")], [("1|->_", "")]),
        "lifts", "balloon", frozenset(),
    ),
    SuiteEntry(
        "balloon-true-id",
        make_form([("true", "")], [("true", "")]),
        "lifts", "balloon", frozenset(),
    ),
    SuiteEntry(
        "lonely-doubled",
        make_form([("1|->_", "a a")], [("true", "a")]),
        "lifts", "lonely",
    ),
    SuiteEntry(
        "lonely-split-vars",
        make_form([("1|->_", "a b")], [("true", "a"), ("true", "b")]),
        "lifts", "lonely",
    ),
    SuiteEntry(
        "lonely-triple",
        make_form([("1|->_", "a a b")], [("true", "a"), ("1|->_", "a b")]),
        "lifts", "lonely",
    ),
    # Layouts rejected by all three criteria; a witness package must exist.
    SuiteEntry(
        "fan",
        make_form([("1|->_", ""), ("true", "a b")],
                  [("1|->_", "a"), ("1|->_", "b")]),
        "no_guarantee",
    ),
    SuiteEntry(
        "fan-renamed-flipped",
        make_form([("true", "c d"), ("1|->_", "")],
                  [("1|->_", "d"), ("1|->_", "c")]),
        "no_guarantee",
    ),
    SuiteEntry(
        "bridge",
        make_form([("-", "a b"), ("true", "a a")],
                  [("-", "a a"), ("-*-", "b")]),
        "no_guarantee",
    ),
    SuiteEntry(
        "bridge-renamed-flipped",
        make_form([("true", "y y"), ("-", "x y")],
                  [("-*-", "x"), ("-", "y y")]),
        "no_guarantee",
    ),
    SuiteEntry(
        "fan-scaled-double",
        make_form([("1|->_", ""), ("true", "a a b")],
                  [("1|->_", "a"), ("1|->_", "b")]),
        "no_guarantee",
    ),
)
