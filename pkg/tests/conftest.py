"""Shared strategies and helpers for the test suite."""

from __future__ import annotations

from itertools import product

import hypothesis.strategies as st

from seplift.heap import Heap
from seplift.relations import GenRel
from seplift.syntax import (
    Add,
    AVar,
    And,
    BoolAtom,
    Exists,
    FalseLit,
    Forall,
    IntLit,
    Neg,
    NonEmptyHeap,
    Or,
    PointsTo,
    PointsToAny,
    Star,
    SubExpr,
    TrueLit,
    VarRef,
)

AVARS = frozenset({"a", "b"})

small_heaps = st.dictionaries(
    st.integers(1, 3), st.integers(0, 1), max_size=2
).map(Heap)


def heap_tuples(n: int):
    return st.tuples(*([small_heaps] * n))


def gen_rels(n: int, max_generators: int = 3):
    return st.frozensets(heap_tuples(n), max_size=max_generators).map(
        lambda gens: GenRel(n, gens)
    )


_expr_leaves = st.one_of(
    st.integers(0, 3).map(IntLit),
    st.sampled_from(["x", "y"]).map(VarRef),
)

exprs = st.recursive(
    _expr_leaves,
    lambda child: st.one_of(
        st.tuples(child, child).map(lambda t: Add(*t)),
        st.tuples(child, child).map(lambda t: SubExpr(*t)),
        child.map(Neg),
    ),
    max_leaves=4,
)

_atoms = st.one_of(
    st.just(TrueLit()),
    st.just(FalseLit()),
    st.just(NonEmptyHeap()),
    st.sampled_from(sorted(AVARS)).map(AVar),
    st.tuples(exprs, exprs).map(lambda t: PointsTo(*t)),
    exprs.map(PointsToAny),
    st.tuples(st.sampled_from(["=", "!=", "<", "<=", ">", ">="]), exprs, exprs).map(
        lambda t: BoolAtom(*t)
    ),
)

assertions = st.recursive(
    _atoms,
    lambda child: st.one_of(
        st.tuples(child, child).map(lambda t: Star(*t)),
        st.tuples(child, child).map(lambda t: And(*t)),
        st.tuples(child, child).map(lambda t: Or(*t)),
        st.tuples(st.sampled_from(["x", "y"]), child).map(lambda t: Forall(*t)),
        st.tuples(st.sampled_from(["x", "y"]), child).map(lambda t: Exists(*t)),
    ),
    max_leaves=8,
)


# Independent reference semantics for bounded relation checks: explicit tuple
# sets over a finite heap universe, with heap extension spelled out on cells.


def naive_extends(small: Heap, big: Heap) -> bool:
    return all(big.get(loc) == val for loc, val in small.cells)


def universe_heaps(max_loc: int, values: tuple[int, ...]) -> list[Heap]:
    locs = list(range(1, max_loc + 1))
    out = []
    for picks in product([None, *values], repeat=len(locs)):
        cells = {loc: v for loc, v in zip(locs, picks) if v is not None}
        out.append(Heap(cells))
    return out


def naive_closure(rel: GenRel, heaps: list[Heap]) -> set[tuple[Heap, ...]]:
    return {
        t
        for t in product(heaps, repeat=rel.arity)
        if any(
            all(naive_extends(g_i, t_i) for g_i, t_i in zip(g, t))
            for g in rel.generators
        )
    }


def heap_splits(h: Heap) -> list[tuple[Heap, Heap]]:
    cells = h.cells
    out = []
    for mask in range(1 << len(cells)):
        left = {c[0]: c[1] for i, c in enumerate(cells) if mask >> i & 1}
        right = {c[0]: c[1] for i, c in enumerate(cells) if not mask >> i & 1}
        out.append((Heap(left), Heap(right)))
    return out
