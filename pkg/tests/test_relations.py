from itertools import product

import pytest
from hypothesis import given, settings

from conftest import (
    gen_rels,
    heap_splits,
    naive_closure,
    naive_extends,
    universe_heaps,
)
from seplift.heap import EMPTY_HEAP, Heap, cells, heap
from seplift.relations import (
    GenRel,
    delta,
    empty,
    equivalent,
    format_relation,
    included,
    meet,
    member,
    parse_relation,
    set_minimization,
    star,
    top,
    union,
)


def points_to_any_unary(loc, values=(0,)):
    return GenRel(1, [(Heap({loc: v}),) for v in values])


def test_member_examples():
    r = GenRel(2, [(heap((1, 0)), heap((1, 0)))])
    assert member(r, (heap((1, 0), (2, 1)), heap((1, 0))))
    assert not member(empty(2), (EMPTY_HEAP, EMPTY_HEAP))
    # the pair of one-cell heaps lies in the binary meaning of "cell 1 present"
    assert member(delta(2, points_to_any_unary(1)), (cells(1), cells(1)))


def test_member_arity_mismatch():
    with pytest.raises(ValueError):
        member(top(2), (EMPTY_HEAP,))


def test_included_examples():
    r = GenRel(2, [(cells(1), cells(2))])
    assert included(r, top(2))
    assert included(empty(2), r)
    # {([1],[])} is not included in the diagonal nonempty-heap relation
    nonempty2 = delta(
        2, GenRel(1, [(Heap({m: 0}),) for m in (1, 2, 3)])
    )
    assert not included(GenRel(2, [(cells(1), EMPTY_HEAP)]), nonempty2)


def test_union_examples():
    r = GenRel(2, [(cells(1), EMPTY_HEAP)])
    assert union(r, empty(2)) == r
    assert union(r, top(2)) == top(2)
    bridge_a = union(
        GenRel(2, [(cells(1), EMPTY_HEAP)]), GenRel(2, [(cells(2), cells(2))])
    )
    assert len(bridge_a.generators) == 2


def test_meet_examples():
    left = GenRel(2, [(heap((1, 0)), EMPTY_HEAP)])
    right = GenRel(2, [(EMPTY_HEAP, heap((1, 0)))])
    assert meet(left, right) == GenRel(2, [(heap((1, 0)), heap((1, 0)))])
    assert meet(GenRel(1, [(heap((1, 0)),)]), GenRel(1, [(heap((1, 1)),)])) == empty(1)


def test_star_examples():
    a = GenRel(2, [(cells(1), EMPTY_HEAP)])
    b = GenRel(2, [(EMPTY_HEAP, cells(1))])
    assert member(star(a, b), (cells(1), cells(1)))
    # starring the diagonal cell-1 relation against a half that also owns
    # cell 1 collides away every generator
    assert star(delta(2, points_to_any_unary(1)), a) == empty(2)
    r = GenRel(2, [(cells(1), cells(2))])
    assert star(r, top(2)) == r


def test_fan_meet_contains_pair():
    a = GenRel(2, [(cells(1), EMPTY_HEAP)])
    b = GenRel(2, [(EMPTY_HEAP, cells(1))])
    lhs = meet(delta(2, points_to_any_unary(1)), star(a, b))
    assert member(lhs, (cells(1), cells(1)))


def test_delta_examples():
    assert delta(3, top(1)) == top(3)
    assert delta(3, empty(1)) == empty(3)
    assert delta(2, GenRel(1, [(heap((1, 0)),)])) == GenRel(
        2, [(heap((1, 0)), heap((1, 0)))]
    )


def test_minimization_canonicalizes():
    redundant = GenRel(1, [(cells(1),), (cells(1, 2),)])
    assert redundant == GenRel(1, [(cells(1),)])


def test_minimization_flag_preserves_membership():
    probe_universe = universe_heaps(2, (0,))
    gens = [(cells(1),), (cells(1, 2),), (cells(2),)]
    previous = set_minimization(False)
    try:
        raw = GenRel(1, gens)
        assert len(raw.generators) == 3
    finally:
        set_minimization(previous)
    minimized = GenRel(1, gens)
    assert len(minimized.generators) == 2
    for h in probe_universe:
        assert member(raw, (h,)) == member(minimized, (h,))


@settings(max_examples=40)
@given(gen_rels(2), gen_rels(2))
def test_lattice_commutativity(r, s):
    assert union(r, s) == union(s, r)
    assert meet(r, s) == meet(s, r)
    assert star(r, s) == star(s, r)


@settings(max_examples=25)
@given(gen_rels(2), gen_rels(2), gen_rels(2))
def test_lattice_associativity(r, s, t):
    assert union(union(r, s), t) == union(r, union(s, t))
    assert meet(meet(r, s), t) == meet(r, meet(s, t))
    assert star(star(r, s), t) == star(r, star(s, t))


@settings(max_examples=40)
@given(gen_rels(2))
def test_lattice_idempotence_and_units(r):
    assert union(r, r) == r
    assert meet(r, r) == r
    assert star(r, top(2)) == r


@settings(max_examples=25)
@given(gen_rels(2), gen_rels(2), gen_rels(2))
def test_meet_distributes_over_union(r, s, t):
    assert equivalent(
        meet(r, union(s, t)), union(meet(r, s), meet(r, t))
    )


# Exactness against the spelled-out reference semantics on a finite universe.
# The universe must cover every heap the generator strategy can produce, or
# the closure comparison would silently ignore out-of-universe generators.

_UNIVERSE = universe_heaps(3, (0, 1))


@settings(max_examples=30)
@given(gen_rels(2, 2), gen_rels(2, 2))
def test_exactness_membership_and_inclusion(r, s):
    closure_r = naive_closure(r, _UNIVERSE)
    closure_s = naive_closure(s, _UNIVERSE)
    for t in product(_UNIVERSE, repeat=2):
        assert member(r, t) == (t in closure_r)
    assert included(r, s) == (closure_r <= closure_s)


@settings(max_examples=30)
@given(gen_rels(2, 2), gen_rels(2, 2))
def test_exactness_meet_union(r, s):
    closure_r = naive_closure(r, _UNIVERSE)
    closure_s = naive_closure(s, _UNIVERSE)
    assert naive_closure(meet(r, s), _UNIVERSE) == closure_r & closure_s
    assert naive_closure(union(r, s), _UNIVERSE) == closure_r | closure_s


@settings(max_examples=20)
@given(gen_rels(2, 2), gen_rels(2, 2))
def test_exactness_star(r, s):
    closure_r = naive_closure(r, _UNIVERSE)
    closure_s = naive_closure(s, _UNIVERSE)
    star_rel = star(r, s)
    for t in product(_UNIVERSE, repeat=2):
        expected = any(
            (u1, u2) in closure_r and (v1, v2) in closure_s
            for u1, v1 in heap_splits(t[0])
            for u2, v2 in heap_splits(t[1])
        )
        assert member(star_rel, t) == expected


def test_relation_literals():
    r = parse_relation("{ ([1|->0],[]) , ([2|->0],[2|->0]) }")
    assert r == GenRel(2, [(cells(1), EMPTY_HEAP), (cells(2), cells(2))])
    assert parse_relation("TOP(3)") == top(3)
    assert parse_relation("EMPTY(2)") == empty(2)
    assert parse_relation(format_relation(r)) == r
    with pytest.raises(ValueError):
        parse_relation("{ ([1],[]) , ([1]) }")
    with pytest.raises(ValueError):
        parse_relation("nonsense")
