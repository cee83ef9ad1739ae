"""Assertion language: AST, parser, pretty-printer, and environments.

Grammar (ASCII concrete syntax)::

    assertion := or
    or        := and ('\\/' and)*
    and       := star ('/\\' star)*
    star      := atom ('*' atom)*
    atom      := 'true' | 'false' | '-' | '(' assertion ')'
               | ('ALL'|'EX') ident '.' or
               | expr '|->' ('_' | expr)
               | expr cmp expr          (pure, heap-independent comparison)
               | avar-ident
    expr      := term (('+'|'-') term)*
    term      := number | ident | '-' term | '(' expr ')'

Separating conjunction binds tighter than conjunction, which binds tighter
than disjunction; quantifiers extend maximally to the right.  A bare ``-`` in
atom position is the nonempty-heap atom.  Assertion variables are lowercase
identifiers and must be declared (the ``avars`` argument); an undeclared bare
identifier is a syntax error, which keeps normal variables and assertion
variables disjoint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .relations import GenRel

__all__ = [
    "Expr",
    "IntLit",
    "VarRef",
    "Add",
    "SubExpr",
    "Neg",
    "Assertion",
    "PointsTo",
    "PointsToAny",
    "NonEmptyHeap",
    "BoolAtom",
    "AVar",
    "Star",
    "And",
    "Or",
    "TrueLit",
    "FalseLit",
    "Forall",
    "Exists",
    "ParseError",
    "parse",
    "parse_expr",
    "pretty",
    "pretty_expr",
    "eval_expr",
    "eval_bool",
    "free_vars",
    "free_expr_vars",
    "assertion_vars",
    "AssertEnv",
    "AssertionFile",
    "parse_assertion_file",
    "star_all",
    "and_all",
    "or_all",
]


# --- expressions -----------------------------------------------------------


class Expr:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True, slots=True)
class VarRef(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class SubExpr(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    operand: Expr


def eval_expr(e: Expr, eta: Mapping[str, int]) -> int:
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, VarRef):
        try:
            return eta[e.name]
        except KeyError:
            raise UnboundVariable(f"normal variable {e.name!r} is unbound") from None
    if isinstance(e, Add):
        return eval_expr(e.left, eta) + eval_expr(e.right, eta)
    if isinstance(e, SubExpr):
        return eval_expr(e.left, eta) - eval_expr(e.right, eta)
    if isinstance(e, Neg):
        return -eval_expr(e.operand, eta)
    raise TypeError(f"not an expression: {e!r}")


def free_expr_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, IntLit):
        return frozenset()
    if isinstance(e, VarRef):
        return frozenset((e.name,))
    if isinstance(e, (Add, SubExpr)):
        return free_expr_vars(e.left) | free_expr_vars(e.right)
    if isinstance(e, Neg):
        return free_expr_vars(e.operand)
    raise TypeError(f"not an expression: {e!r}")


# --- assertions ------------------------------------------------------------


class Assertion:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class PointsTo(Assertion):
    addr: Expr
    value: Expr


@dataclass(frozen=True, slots=True)
class PointsToAny(Assertion):
    """``E |-> _``, a cell at E with an unspecified value."""

    addr: Expr


@dataclass(frozen=True, slots=True)
class NonEmptyHeap(Assertion):
    """The ``-`` atom: heaps containing at least one cell."""


_CMP_OPS = ("=", "!=", "<", "<=", ">", ">=")
_CMP_NEGATION = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", "<=": ">", ">": "<="}


@dataclass(frozen=True, slots=True)
class BoolAtom(Assertion):
    """A heap-independent comparison; denotes everything or nothing."""

    op: str
    left: Expr
    right: Expr

    def negated(self) -> "BoolAtom":
        return BoolAtom(_CMP_NEGATION[self.op], self.left, self.right)


@dataclass(frozen=True, slots=True)
class AVar(Assertion):
    name: str


@dataclass(frozen=True, slots=True)
class Star(Assertion):
    left: Assertion
    right: Assertion


@dataclass(frozen=True, slots=True)
class And(Assertion):
    left: Assertion
    right: Assertion


@dataclass(frozen=True, slots=True)
class Or(Assertion):
    left: Assertion
    right: Assertion


@dataclass(frozen=True, slots=True)
class TrueLit(Assertion):
    pass


@dataclass(frozen=True, slots=True)
class FalseLit(Assertion):
    pass


@dataclass(frozen=True, slots=True)
class Forall(Assertion):
    var: str
    body: Assertion


@dataclass(frozen=True, slots=True)
class Exists(Assertion):
    var: str
    body: Assertion


class UnboundVariable(LookupError):
    pass


def eval_bool(b: BoolAtom, eta: Mapping[str, int]) -> bool:
    lhs = eval_expr(b.left, eta)
    rhs = eval_expr(b.right, eta)
    if b.op == "=":
        return lhs == rhs
    if b.op == "!=":
        return lhs != rhs
    if b.op == "<":
        return lhs < rhs
    if b.op == "<=":
        return lhs <= rhs
    if b.op == ">":
        return lhs > rhs
    if b.op == ">=":
        return lhs >= rhs
    raise ValueError(f"unknown comparison {b.op!r}")


def free_vars(a: Assertion) -> frozenset[str]:
    """Free normal variables; quantifiers bind as usual."""
    if isinstance(a, PointsTo):
        return free_expr_vars(a.addr) | free_expr_vars(a.value)
    if isinstance(a, PointsToAny):
        return free_expr_vars(a.addr)
    if isinstance(a, BoolAtom):
        return free_expr_vars(a.left) | free_expr_vars(a.right)
    if isinstance(a, (NonEmptyHeap, AVar, TrueLit, FalseLit)):
        return frozenset()
    if isinstance(a, (Star, And, Or)):
        return free_vars(a.left) | free_vars(a.right)
    if isinstance(a, (Forall, Exists)):
        return free_vars(a.body) - {a.var}
    raise TypeError(f"not an assertion: {a!r}")


def assertion_vars(a: Assertion) -> frozenset[str]:
    if isinstance(a, AVar):
        return frozenset((a.name,))
    if isinstance(a, (Star, And, Or)):
        return assertion_vars(a.left) | assertion_vars(a.right)
    if isinstance(a, (Forall, Exists)):
        return assertion_vars(a.body)
    if isinstance(
        a, (PointsTo, PointsToAny, NonEmptyHeap, BoolAtom, TrueLit, FalseLit)
    ):
        return frozenset()
    raise TypeError(f"not an assertion: {a!r}")


def star_all(parts: list[Assertion]) -> Assertion:
    if not parts:
        return TrueLit()
    result = parts[0]
    for p in parts[1:]:
        result = Star(result, p)
    return result


def and_all(parts: list[Assertion]) -> Assertion:
    if not parts:
        return TrueLit()
    result = parts[0]
    for p in parts[1:]:
        result = And(result, p)
    return result


def or_all(parts: list[Assertion]) -> Assertion:
    if not parts:
        return FalseLit()
    result = parts[0]
    for p in parts[1:]:
        result = Or(result, p)
    return result


# --- tokenizer -------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        super().__init__(f"{message} at offset {position}: {text!r}")
        self.position = position


# The token set also covers the command language (":=", brackets, braces,
# ";"), so the command parser can share this tokenizer.
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>\|->|\|=|:=|/\\|\\/|<=|>=|!=|[-+*().,_=<>\[\]{};])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"true", "false", "ALL", "EX"}


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # 'num', 'ident', 'op', 'eof'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos, text)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, avars: frozenset[str]):
        self.text = text
        self.avars = avars
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            raise ParseError(f"expected {text!r}", tok.pos, self.text)
        return self.advance()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.peek().pos, self.text)

    # assertion levels

    def assertion(self) -> Assertion:
        return self.or_level()

    def or_level(self) -> Assertion:
        node = self.and_level()
        while self.peek().text == "\\/":
            self.advance()
            node = Or(node, self.and_level())
        return node

    def and_level(self) -> Assertion:
        node = self.star_level()
        while self.peek().text == "/\\":
            self.advance()
            node = And(node, self.star_level())
        return node

    def star_level(self) -> Assertion:
        node = self.atom()
        while self.peek().text == "*":
            self.advance()
            node = Star(node, self.atom())
        return node

    def atom(self) -> Assertion:
        tok = self.peek()
        if tok.text == "true":
            self.advance()
            return TrueLit()
        if tok.text == "false":
            self.advance()
            return FalseLit()
        if tok.text in ("ALL", "EX"):
            self.advance()
            name = self.peek()
            if name.kind != "ident" or name.text in _KEYWORDS:
                raise self.error("expected a variable after quantifier")
            if name.text in self.avars:
                raise self.error("quantifier cannot bind an assertion variable")
            self.advance()
            self.expect(".")
            body = self.or_level()
            return (Forall if tok.text == "ALL" else Exists)(name.text, body)
        if tok.text == "-" and not self._minus_starts_expr():
            self.advance()
            return NonEmptyHeap()
        if tok.text == "(":
            # Could be a parenthesised assertion or an expression followed by
            # |-> or a comparison; try the expression reading first.
            snapshot = self.index
            try:
                expr = self.expr()
                follow = self.peek().text
                if follow == "|->" or follow in _CMP_OPS:
                    return self._after_expr(expr)
            except ParseError:
                pass
            self.index = snapshot
            self.advance()
            node = self.or_level()
            self.expect(")")
            return node
        if tok.kind in ("num", "ident") or tok.text == "-":
            expr = self.expr()
            follow = self.peek().text
            if follow == "|->" or follow in _CMP_OPS:
                return self._after_expr(expr)
            if isinstance(expr, VarRef):
                if expr.name in self.avars:
                    return AVar(expr.name)
                raise self.error(
                    f"bare identifier {expr.name!r} is not a declared assertion "
                    "variable (declare it with 'avars:') and no '|->' follows"
                )
            raise self.error("expression is not an assertion; expected '|->'")
        raise self.error("expected an assertion")

    def _after_expr(self, expr: Expr) -> Assertion:
        follow = self.advance()
        if follow.text == "|->":
            if self.peek().text == "_":
                self.advance()
                return PointsToAny(expr)
            return PointsTo(expr, self.expr())
        return BoolAtom(follow.text, expr, self.expr())

    def _minus_starts_expr(self) -> bool:
        nxt = self.tokens[self.index + 1]
        if nxt.text == "(" or nxt.text == "-":
            # "-(" can only be negation (atoms never juxtapose a paren), and
            # "--" can only be a double negation.
            return True
        return nxt.kind == "num" or (nxt.kind == "ident" and nxt.text not in _KEYWORDS)

    # expressions

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else SubExpr(node, rhs)
        return node

    def term(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return IntLit(int(tok.text))
        if tok.kind == "ident" and tok.text not in _KEYWORDS:
            self.advance()
            return VarRef(tok.text)
        if tok.text == "-":
            self.advance()
            return Neg(self.term())
        if tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise self.error("expected an arithmetic expression")


def parse(text: str, avars: Iterator[str] | frozenset[str] = frozenset()) -> Assertion:
    """Parse an assertion; `avars` lists the declared assertion variables."""
    parser = _Parser(text, frozenset(avars))
    node = parser.assertion()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError("trailing input after assertion", tok.pos, text)
    return node


def parse_expr(text: str) -> Expr:
    parser = _Parser(text, frozenset())
    node = parser.expr()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError("trailing input after expression", tok.pos, text)
    return node


# --- pretty-printing -------------------------------------------------------

_LEVEL_OR, _LEVEL_AND, _LEVEL_STAR, _LEVEL_ATOM = range(4)


def pretty_expr(e: Expr) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, VarRef):
        return e.name
    if isinstance(e, Add):
        return f"{pretty_expr(e.left)}+{_expr_operand(e.right)}"
    if isinstance(e, SubExpr):
        return f"{pretty_expr(e.left)}-{_expr_operand(e.right)}"
    if isinstance(e, Neg):
        return f"-{_expr_operand(e.operand)}"
    raise TypeError(f"not an expression: {e!r}")


def _expr_operand(e: Expr) -> str:
    text = pretty_expr(e)
    if isinstance(e, (Add, SubExpr, Neg)):
        return f"({text})"
    return text


def pretty(a: Assertion) -> str:
    """Render with minimal parentheses; `parse(pretty(a))` returns `a`."""
    return _pretty(a, _LEVEL_OR, tail=True)


def _pretty(a: Assertion, level: int, tail: bool) -> str:
    if isinstance(a, TrueLit):
        return "true"
    if isinstance(a, FalseLit):
        return "false"
    if isinstance(a, NonEmptyHeap):
        return "-"
    if isinstance(a, AVar):
        return a.name
    if isinstance(a, PointsTo):
        return f"{_points_addr(a.addr)} |-> {pretty_expr(a.value)}"
    if isinstance(a, PointsToAny):
        return f"{_points_addr(a.addr)} |-> _"
    if isinstance(a, BoolAtom):
        return f"{pretty_expr(a.left)} {a.op} {pretty_expr(a.right)}"
    if isinstance(a, Or):
        text = (
            f"{_pretty(a.left, _LEVEL_OR, False)} \\/ "
            f"{_pretty(a.right, _LEVEL_AND, tail)}"
        )
        return f"({text})" if level > _LEVEL_OR else text
    if isinstance(a, And):
        text = (
            f"{_pretty(a.left, _LEVEL_AND, False)} /\\ "
            f"{_pretty(a.right, _LEVEL_STAR, tail)}"
        )
        return f"({text})" if level > _LEVEL_AND else text
    if isinstance(a, Star):
        text = (
            f"{_pretty(a.left, _LEVEL_STAR, False)} * "
            f"{_pretty(a.right, _LEVEL_ATOM, tail)}"
        )
        return f"({text})" if level > _LEVEL_STAR else text
    if isinstance(a, (Forall, Exists)):
        word = "ALL" if isinstance(a, Forall) else "EX"
        text = f"{word} {a.var}. {_pretty(a.body, _LEVEL_OR, True)}"
        # A quantifier extends maximally to the right, so it can appear bare
        # only where nothing follows it.
        return text if tail else f"({text})"
    raise TypeError(f"not an assertion: {a!r}")


def _points_addr(e: Expr) -> str:
    # A trailing unparenthesised +/- would absorb the points-to arrow operand.
    text = pretty_expr(e)
    if isinstance(e, (Add, SubExpr, Neg)):
        return f"({text})"
    return text


# --- environments ----------------------------------------------------------


@dataclass(frozen=True)
class AssertEnv:
    """A finite map from assertion variables to relations of one arity."""

    arity: int
    mapping: Mapping[str, GenRel] = field(default_factory=dict)

    def __post_init__(self):
        for name, rel in self.mapping.items():
            if rel.arity != self.arity:
                raise ValueError(
                    f"relation for {name!r} has arity {rel.arity}, expected {self.arity}"
                )

    def __getitem__(self, name: str) -> GenRel:
        try:
            return self.mapping[name]
        except KeyError:
            raise UnboundVariable(f"assertion variable {name!r} is unbound") from None

    def __contains__(self, name: str) -> bool:
        return name in self.mapping

    def items(self):
        return sorted(self.mapping.items())


# --- assertion files -------------------------------------------------------


@dataclass(frozen=True)
class AssertionFile:
    avars: frozenset[str]
    eta: Mapping[str, int]
    assertions: tuple[Assertion, ...]
    implications: tuple[tuple[Assertion, Assertion], ...]


def parse_assertion_file(text: str) -> AssertionFile:
    """Parse an assertion file.

    Header lines: ``avars: a, b`` and optionally ``env: x=3, y=0``.  Every
    following nonempty line is either a single assertion or an implication
    written ``LHS |= RHS``.  ``#`` starts a comment.
    """
    avars: frozenset[str] = frozenset()
    eta: dict[str, int] = {}
    assertions: list[Assertion] = []
    implications: list[tuple[Assertion, Assertion]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("avars:"):
                names = [n.strip() for n in line[len("avars:") :].split(",")]
                avars = frozenset(n for n in names if n)
            elif line.startswith("env:"):
                for binding in line[len("env:") :].split(","):
                    if not binding.strip():
                        continue
                    name, _, value = binding.partition("=")
                    eta[name.strip()] = int(value.strip())
            elif "|=" in line:
                lhs_text, _, rhs_text = line.partition("|=")
                implications.append(
                    (parse(lhs_text, avars), parse(rhs_text, avars))
                )
            else:
                assertions.append(parse(line, avars))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc.args[0]}", exc.position, raw)
    return AssertionFile(avars, eta, tuple(assertions), tuple(implications))
