"""Finitely generated upward-closed n-ary heap relations.

A relation is represented by a finite set of generator tuples; it denotes the
upward closure of those tuples under componentwise heap extension.  This class
of relations is closed under union, intersection (via componentwise merge of
generators), separating conjunction (via componentwise compose), and the
diagonal embedding of unary predicates, which is everything the assertion
interpreter needs.  Membership and inclusion are exact, with no bound on heap
size, which is what the counterexample machinery relies on: relations such as
{([1|->0], [])}^ are infinite as sets but have a one-tuple description here.

Generator sets are kept as antichains: a generator extending another is
redundant and is dropped.  Two relations are equal iff their antichains are
equal, so structural equality coincides with semantic equality.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .heap import EMPTY_HEAP, Heap, compose, extends, merge, parse_heap

__all__ = [
    "GenRel",
    "HeapTuple",
    "top",
    "empty",
    "member",
    "included",
    "union",
    "meet",
    "star",
    "delta",
    "tuple_compose",
    "tuple_merge",
    "tuple_extends",
    "set_minimization",
    "parse_relation",
    "format_relation",
]

HeapTuple = tuple[Heap, ...]

# Antichain minimization can be switched off to debug generator bookkeeping;
# all operations still compute the same closures, just with redundant tuples.
_minimize_enabled = True


def set_minimization(enabled: bool) -> bool:
    """Toggle antichain minimization; returns the previous setting."""
    global _minimize_enabled
    previous = _minimize_enabled
    _minimize_enabled = enabled
    return previous


def tuple_compose(s: HeapTuple, t: HeapTuple) -> HeapTuple | None:
    out = []
    for f, g in zip(s, t):
        h = compose(f, g)
        if h is None:
            return None
        out.append(h)
    return tuple(out)


def tuple_merge(s: HeapTuple, t: HeapTuple) -> HeapTuple | None:
    out = []
    for f, g in zip(s, t):
        h = merge(f, g)
        if h is None:
            return None
        out.append(h)
    return tuple(out)


def tuple_extends(s: HeapTuple, t: HeapTuple) -> bool:
    return all(extends(f, g) for f, g in zip(s, t))


def tuple_sort_key(t: HeapTuple) -> tuple:
    return (sum(len(h) for h in t), tuple(h.sort_key() for h in t))


def _minimize(tuples: Iterable[HeapTuple]) -> frozenset[HeapTuple]:
    pool = list(set(tuples))
    pool.sort(key=tuple_sort_key)
    kept: list[HeapTuple] = []
    for cand in pool:
        if not any(tuple_extends(small, cand) for small in kept):
            kept.append(cand)
    return frozenset(kept)


class GenRel:
    """An upward-closed heap relation given by a finite generator antichain."""

    __slots__ = ("_arity", "_generators", "_hash")

    def __init__(self, arity: int, generators: Iterable[HeapTuple] = ()):
        if arity < 1:
            raise ValueError("arity must be positive")
        gens = frozenset(generators)
        for g in gens:
            if len(g) != arity:
                raise ValueError(f"generator {g} does not have arity {arity}")
        if _minimize_enabled:
            gens = _minimize(gens)
        object.__setattr__(self, "_arity", arity)
        object.__setattr__(self, "_generators", gens)
        object.__setattr__(self, "_hash", hash((arity, gens)))

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("GenRel instances are immutable")

    @property
    def arity(self) -> int:
        return self._arity

    @property
    def generators(self) -> frozenset[HeapTuple]:
        return self._generators

    def sorted_generators(self) -> list[HeapTuple]:
        return sorted(self._generators, key=tuple_sort_key)

    def is_empty(self) -> bool:
        return not self._generators

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GenRel):
            return NotImplemented
        return self._arity == other._arity and self._generators == other._generators

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"GenRel({self._arity}, {format_relation(self)})"

    def __contains__(self, t: HeapTuple) -> bool:
        return member(self, t)

    def __or__(self, other: "GenRel") -> "GenRel":
        return union(self, other)

    def __and__(self, other: "GenRel") -> "GenRel":
        return meet(self, other)

    def __mul__(self, other: "GenRel") -> "GenRel":
        return star(self, other)

    def __le__(self, other: "GenRel") -> bool:
        return included(self, other)


def top(arity: int) -> GenRel:
    """The full relation Heap^arity (generated by the all-empty tuple)."""
    return GenRel(arity, [(EMPTY_HEAP,) * arity])


def empty(arity: int) -> GenRel:
    return GenRel(arity, [])


def _check_arity(r: GenRel, s: GenRel) -> None:
    if r.arity != s.arity:
        raise ValueError(f"arity mismatch: {r.arity} vs {s.arity}")


def member(r: GenRel, t: HeapTuple) -> bool:
    """Whether t lies in the upward closure of r's generators."""
    if len(t) != r.arity:
        raise ValueError(f"tuple arity {len(t)} does not match relation {r.arity}")
    return any(tuple_extends(g, t) for g in r.generators)


def included(r: GenRel, s: GenRel) -> bool:
    """Exact inclusion of closures: every generator of r is a member of s."""
    _check_arity(r, s)
    return all(member(s, g) for g in r.generators)


def equivalent(r: GenRel, s: GenRel) -> bool:
    return included(r, s) and included(s, r)


@lru_cache(maxsize=1 << 16)
def union(r: GenRel, s: GenRel) -> GenRel:
    _check_arity(r, s)
    return GenRel(r.arity, r.generators | s.generators)


@lru_cache(maxsize=1 << 16)
def meet(r: GenRel, s: GenRel) -> GenRel:
    """Intersection of closures.

    A tuple extends both some g in r and some f in s iff it extends their
    componentwise merge, so merging generator pairs is exact.
    """
    _check_arity(r, s)
    out = []
    for g in r.generators:
        for f in s.generators:
            m = tuple_merge(g, f)
            if m is not None:
                out.append(m)
    return GenRel(r.arity, out)


@lru_cache(maxsize=1 << 16)
def star(r: GenRel, s: GenRel) -> GenRel:
    """Separating conjunction: componentwise disjoint composition."""
    _check_arity(r, s)
    out = []
    for g in r.generators:
        for f in s.generators:
            c = tuple_compose(g, f)
            if c is not None:
                out.append(c)
    return GenRel(r.arity, out)


@lru_cache(maxsize=1 << 16)
def delta(n: int, p: GenRel) -> GenRel:
    """Diagonal embedding of a unary predicate as an n-ary relation."""
    if p.arity != 1:
        raise ValueError("delta expects a unary relation")
    return GenRel(n, [(g[0],) * n for g in p.generators])


_KEYWORD_FORMS = ("TOP", "EMPTY")


def parse_relation(text: str, arity: int | None = None) -> GenRel:
    """Parse a relation literal.

    Accepted forms: "TOP(n)", "EMPTY(n)", or a generator-set literal such as
    "{ ([1|->0],[]) , ([2|->0],[2|->0]) }" denoting the upward closure of the
    listed tuples.
    """
    stripped = text.strip()
    for keyword in _KEYWORD_FORMS:
        if stripped.upper().startswith(keyword + "("):
            inner = stripped[len(keyword) + 1 :].strip()
            if not inner.endswith(")"):
                raise ValueError(f"malformed relation literal {text!r}")
            n = int(inner[:-1])
            return top(n) if keyword == "TOP" else empty(n)
    if not (stripped.startswith("{") and stripped.endswith("}")):
        raise ValueError(f"relation literal must be braced or TOP/EMPTY: {text!r}")
    body = stripped[1:-1].strip()
    tuples: list[HeapTuple] = []
    pos = 0
    while pos < len(body):
        if body[pos].isspace() or body[pos] == ",":
            pos += 1
            continue
        if body[pos] != "(":
            raise ValueError(f"expected '(' at offset {pos} in {text!r}")
        depth_end = body.find(")", pos)
        if depth_end < 0:
            raise ValueError(f"unclosed tuple in {text!r}")
        chunk = body[pos + 1 : depth_end]
        heaps = _split_heap_list(chunk)
        tuples.append(tuple(parse_heap(h) for h in heaps))
        pos = depth_end + 1
    if not tuples and arity is None:
        raise ValueError(
            "empty generator literal needs an explicit arity; use EMPTY(n)"
        )
    inferred = arity if arity is not None else len(tuples[0])
    for t in tuples:
        if len(t) != inferred:
            raise ValueError(f"mixed tuple arities in {text!r}")
    return GenRel(inferred, tuples)


def _split_heap_list(chunk: str) -> list[str]:
    parts = []
    depth = 0
    current = ""
    for ch in chunk:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(current)
            current = ""
        else:
            current += ch
    if current.strip():
        parts.append(current)
    return [p.strip() for p in parts if p.strip()]


def format_relation(r: GenRel) -> str:
    if r.is_empty():
        return f"EMPTY({r.arity})"
    if r == top(r.arity):
        return f"TOP({r.arity})"
    gens = ", ".join(
        "(" + ",".join(str(h) for h in g) + ")" for g in r.sorted_generators()
    )
    return "{ " + gens + " }"
