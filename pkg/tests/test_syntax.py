import pytest
from hypothesis import given, settings

from conftest import AVARS, assertions
from seplift.relations import top
from seplift.syntax import (
    And,
    AssertEnv,
    AVar,
    BoolAtom,
    Exists,
    IntLit,
    NonEmptyHeap,
    Or,
    ParseError,
    PointsTo,
    PointsToAny,
    Star,
    SubExpr,
    TrueLit,
    VarRef,
    eval_bool,
    eval_expr,
    free_vars,
    assertion_vars,
    parse,
    parse_assertion_file,
    parse_expr,
    pretty,
)


def test_parse_precedence_conj_over_star():
    node = parse("1|->_ /\\ a * b", AVARS)
    assert node == And(PointsToAny(IntLit(1)), Star(AVar("a"), AVar("b")))


def test_parse_disjunction_of_stars():
    node = parse("1|->_ * a \\/ 1|->_ * b", AVARS)
    assert node == Or(
        Star(PointsToAny(IntLit(1)), AVar("a")),
        Star(PointsToAny(IntLit(1)), AVar("b")),
    )


def test_parse_existential_wildcard_desugaring():
    explicit = parse("EX x. 1 |-> x")
    assert explicit == Exists("x", PointsTo(IntLit(1), VarRef("x")))
    # same meaning as the wildcard arrow, checked in the semantics tests
    assert parse("1 |-> _") == PointsToAny(IntLit(1))


def test_quantifier_extends_right():
    node = parse("EX x. 1|->x \\/ 2|->x")
    assert isinstance(node, Exists)
    assert isinstance(node.body, Or)


def test_nonempty_atom_vs_minus():
    assert parse("- * a", AVARS) == Star(NonEmptyHeap(), AVar("a"))
    assert parse("1 - 1 |-> 0") == PointsTo(SubExpr(IntLit(1), IntLit(1)), IntLit(0))


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        parse("1|->_ /\\ (a * ", AVARS)
    assert exc.value.position >= 10
    with pytest.raises(ParseError):
        parse("c * a", AVARS)  # c undeclared
    with pytest.raises(ParseError):
        parse("1|->_ extra", AVARS)


def test_boolatom_parsing():
    node = parse("x = 0")
    assert node == BoolAtom("=", VarRef("x"), IntLit(0))
    assert eval_bool(node, {"x": 0})
    assert not eval_bool(node, {"x": 2})


def test_expr_eval():
    e = parse_expr("x + 2 - -y")
    assert eval_expr(e, {"x": 1, "y": 3}) == 6


def test_free_vars_respect_binders():
    node = parse("EX x. 1|->x /\\ 2|->y")
    assert free_vars(node) == {"y"}
    assert free_vars(parse("ALL y. 1 |-> y")) == frozenset()
    assert assertion_vars(parse("a * (b \\/ a)", AVARS)) == {"a", "b"}


@settings(max_examples=200)
@given(assertions)
def test_parse_pretty_round_trip(node):
    assert parse(pretty(node), AVARS) == node


def test_pretty_minimal_parens():
    assert pretty(parse("a * b /\\ a", AVARS)) == "a * b /\\ a"
    assert pretty(parse("(a \\/ b) * a", AVARS)) == "(a \\/ b) * a"
    assert pretty(TrueLit()) == "true"
    assert pretty(parse("false")) == "false"


def test_assert_env_arity_checked():
    with pytest.raises(ValueError):
        AssertEnv(2, {"a": top(1)})
    env = AssertEnv(2, {"a": top(2)})
    assert "a" in env and "b" not in env


def test_assertion_file():
    doc = parse_assertion_file(
        """
        # demo file
        avars: a, b
        env: x=3, y=0
        1 |-> x
        1|->_ /\\ a*b |= 1|->_
        """
    )
    assert doc.avars == {"a", "b"}
    assert doc.eta == {"x": 3, "y": 0}
    assert len(doc.assertions) == 1
    assert len(doc.implications) == 1
    lhs, rhs = doc.implications[0]
    assert assertion_vars(lhs) == {"a", "b"}
    assert assertion_vars(rhs) == frozenset()


def test_assertion_file_reports_line():
    with pytest.raises(ParseError) as exc:
        parse_assertion_file("avars: a\n\n((a\n")
    assert "line 3" in str(exc.value)
