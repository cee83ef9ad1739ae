"""Relational interpretation of assertions and bounded environment search.

``interpret`` maps an assertion to a finitely generated n-ary relation, given
an integer environment for normal variables and a relation environment for
assertion variables.  Primitive predicates enter through the diagonal
embedding of their standard unary meaning; the connectives map to the
relation algebra; quantifiers are finite joins/meets over a configurable
value domain.  Results are exact for quantifier-free assertions and
domain-relative otherwise, which every report states.

``find_counter_env`` searches the space of assertion-variable environments
within a budget for a refutation of an implication at a given arity, and
``pc_check`` decides (within a heap bound) the semantic condition that makes
an implication valid for arity-independent reasons: every family of subheaps
of a common heap that lands in the left conjunct bases must already be
covered by a disjunct whose variable counts do not exceed the conjunct's, or
by a variable-free disjunct containing the whole heap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Mapping

from .heap import EMPTY_HEAP, Heap
from .layout import compute_layout
from .normalize import ImplicationForm
from .relations import (
    GenRel,
    HeapTuple,
    delta,
    empty,
    included,
    meet,
    member,
    star,
    top,
    tuple_extends,
    tuple_sort_key,
    union,
)
from .syntax import (
    And,
    AssertEnv,
    Assertion,
    AVar,
    BoolAtom,
    Exists,
    FalseLit,
    Forall,
    NonEmptyHeap,
    Or,
    PointsTo,
    PointsToAny,
    Star,
    TrueLit,
    assertion_vars,
    eval_bool,
    eval_expr,
)

__all__ = [
    "ValueDomain",
    "SearchBudget",
    "DEFAULT_DOMAIN",
    "DEFAULT_BUDGET",
    "interpret",
    "env_valid",
    "CounterexampleEnv",
    "find_counter_env",
    "candidate_relations",
    "bounded_heaps",
    "PCVerdict",
    "pc_check",
]


@dataclass(frozen=True)
class ValueDomain:
    """Finite integer domain for quantifiers and wildcard cell values.

    `locations` bounds the cells considered by the nonempty-heap atom, whose
    exact meaning ranges over all positive locations.
    """

    values: tuple[int, ...] = (0, 1)
    locations: tuple[int, ...] = (1, 2, 3)

    def __post_init__(self):
        if not self.values:
            raise ValueError("value domain must be nonempty")
        if not self.locations or any(loc <= 0 for loc in self.locations):
            raise ValueError("locations must be a nonempty set of positive ints")
        object.__setattr__(self, "values", tuple(sorted(set(self.values))))
        object.__setattr__(self, "locations", tuple(sorted(set(self.locations))))


@dataclass(frozen=True)
class SearchBudget:
    """Bounds for environment and heap enumeration.

    max_loc: locations range over 1..max_loc; values: cell values; max
    generators per candidate relation; max cells per generator heap.
    """

    max_loc: int = 3
    values: tuple[int, ...] = (0,)
    max_generators: int = 2
    max_heap_size: int = 1

    def __post_init__(self):
        if min(self.max_loc, self.max_generators, self.max_heap_size) < 1:
            raise ValueError("budget fields must be positive")
        if not self.values:
            raise ValueError("budget needs a nonempty value set")
        object.__setattr__(self, "values", tuple(sorted(set(self.values))))

    def domain(self) -> ValueDomain:
        return ValueDomain(self.values, tuple(range(1, self.max_loc + 1)))


DEFAULT_DOMAIN = ValueDomain()
DEFAULT_BUDGET = SearchBudget()


# --- interpretation ---------------------------------------------------------


def _freeze_eta(eta: Mapping[str, int] | None) -> tuple[tuple[str, int], ...]:
    if not eta:
        return ()
    return tuple(sorted(eta.items()))


@lru_cache(maxsize=1 << 14)
def _prim_unary(
    prim: Assertion, eta_key: tuple[tuple[str, int], ...], dom: ValueDomain
) -> GenRel:
    """Standard meaning of a primitive predicate as a unary relation."""
    eta = dict(eta_key)
    if isinstance(prim, PointsTo):
        loc = eval_expr(prim.addr, eta)
        if loc <= 0:
            return empty(1)
        return GenRel(1, [(Heap({loc: eval_expr(prim.value, eta)}),)])
    if isinstance(prim, PointsToAny):
        loc = eval_expr(prim.addr, eta)
        if loc <= 0:
            return empty(1)
        return GenRel(1, [(Heap({loc: v}),) for v in dom.values])
    if isinstance(prim, NonEmptyHeap):
        return GenRel(
            1, [(Heap({m: v}),) for m in dom.locations for v in dom.values]
        )
    if isinstance(prim, BoolAtom):
        return top(1) if eval_bool(prim, eta) else empty(1)
    raise TypeError(f"not a primitive predicate: {prim!r}")


def interpret(
    phi: Assertion,
    eta: Mapping[str, int] | None,
    rho: AssertEnv | None,
    n: int,
    dom: ValueDomain = DEFAULT_DOMAIN,
) -> GenRel:
    """The n-ary meaning of `phi` under environments `eta` and `rho`."""
    if rho is not None and rho.arity != n:
        raise ValueError(f"environment arity {rho.arity} does not match n={n}")
    return _interpret(phi, _freeze_eta(eta), rho, n, dom)


def _interpret(
    phi: Assertion,
    eta_key: tuple[tuple[str, int], ...],
    rho: AssertEnv | None,
    n: int,
    dom: ValueDomain,
) -> GenRel:
    if isinstance(phi, (PointsTo, PointsToAny, NonEmptyHeap, BoolAtom)):
        return delta(n, _prim_unary(phi, eta_key, dom))
    if isinstance(phi, AVar):
        if rho is None or phi.name not in rho:
            from .syntax import UnboundVariable

            raise UnboundVariable(f"assertion variable {phi.name!r} is unbound")
        return rho[phi.name]
    if isinstance(phi, TrueLit):
        return top(n)
    if isinstance(phi, FalseLit):
        return empty(n)
    if isinstance(phi, Star):
        return star(
            _interpret(phi.left, eta_key, rho, n, dom),
            _interpret(phi.right, eta_key, rho, n, dom),
        )
    if isinstance(phi, And):
        return meet(
            _interpret(phi.left, eta_key, rho, n, dom),
            _interpret(phi.right, eta_key, rho, n, dom),
        )
    if isinstance(phi, Or):
        return union(
            _interpret(phi.left, eta_key, rho, n, dom),
            _interpret(phi.right, eta_key, rho, n, dom),
        )
    if isinstance(phi, Exists):
        result = empty(n)
        for v in dom.values:
            eta_v = tuple(sorted((dict(eta_key) | {phi.var: v}).items()))
            result = union(result, _interpret(phi.body, eta_v, rho, n, dom))
        return result
    if isinstance(phi, Forall):
        result = top(n)
        for v in dom.values:
            eta_v = tuple(sorted((dict(eta_key) | {phi.var: v}).items()))
            result = meet(result, _interpret(phi.body, eta_v, rho, n, dom))
        return result
    raise TypeError(f"not an assertion: {phi!r}")


def env_valid(
    lhs: Assertion,
    rhs: Assertion,
    eta: Mapping[str, int] | None,
    rho: AssertEnv | None,
    n: int,
    dom: ValueDomain = DEFAULT_DOMAIN,
) -> bool:
    """Whether lhs entails rhs at arity n under the given fixed environments."""
    return included(interpret(lhs, eta, rho, n, dom), interpret(rhs, eta, rho, n, dom))


# --- bounded enumeration ----------------------------------------------------


def bounded_heaps(
    max_loc: int, values: Iterable[int], max_cells: int | None = None
) -> list[Heap]:
    """All heaps over locations 1..max_loc with the given values, sorted.

    `max_cells` restricts the domain size; None means up to max_loc cells.
    """
    values = tuple(sorted(set(values)))
    locs = range(1, max_loc + 1)
    limit = max_loc if max_cells is None else min(max_cells, max_loc)
    out: list[Heap] = []
    for size in range(limit + 1):
        for chosen in combinations(locs, size):
            for vals in product(values, repeat=size):
                out.append(Heap(dict(zip(chosen, vals))))
    out.sort(key=Heap.sort_key)
    return out


def _bounded_tuples(n: int, budget: SearchBudget) -> list[HeapTuple]:
    heaps = bounded_heaps(budget.max_loc, budget.values, budget.max_heap_size)
    tuples = [t for t in product(heaps, repeat=n)]
    tuples.sort(key=tuple_sort_key)
    return tuples


def candidate_relations(n: int, budget: SearchBudget) -> list[list[GenRel]]:
    """Candidate relations within budget, grouped by generator count.

    Entry k lists the relations with exactly k generators.  Only antichains
    are listed: a generator set with a redundant tuple denotes the same
    relation as its minimization, so nothing is lost.
    """
    tuples = _bounded_tuples(n, budget)
    by_size: list[list[GenRel]] = [[GenRel(n, [])]]
    for size in range(1, budget.max_generators + 1):
        group: list[GenRel] = []
        for combo in combinations(tuples, size):
            if size > 1 and any(
                tuple_extends(a, b) or tuple_extends(b, a)
                for a, b in combinations(combo, 2)
            ):
                continue
            group.append(GenRel(n, combo))
        by_size.append(group)
    return by_size


def _size_vectors(num_vars: int, max_size: int) -> Iterable[tuple[int, ...]]:
    """Size assignments ordered by total, then lexicographically."""
    vectors = sorted(
        product(range(max_size + 1), repeat=num_vars), key=lambda v: (sum(v), v)
    )
    return vectors


@dataclass(frozen=True)
class CounterexampleEnv:
    """A refuting environment plus a tuple in the left side but not the right."""

    rho: AssertEnv
    witness: HeapTuple


def find_counter_env(
    lhs: Assertion,
    rhs: Assertion,
    eta: Mapping[str, int] | None,
    n: int,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> CounterexampleEnv | None:
    """Search assertion-variable environments for a refutation at arity n.

    Enumerates candidate relations per variable (generator antichains within
    the budget) in increasing total generator count, deterministically;
    returns the first refutation found, or None when the budget space is
    exhausted.  None is not a validity proof: it only rules out refutations
    within the budget and value domain.
    """
    variables = sorted(assertion_vars(lhs) | assertion_vars(rhs))
    dom = budget.domain()
    eta_key = _freeze_eta(eta)
    if not variables:
        lhs_rel = _interpret(lhs, eta_key, None, n, dom)
        rhs_rel = _interpret(rhs, eta_key, None, n, dom)
        witness = _first_escapee(lhs_rel, rhs_rel)
        if witness is not None:
            return CounterexampleEnv(AssertEnv(n, {}), witness)
        return None

    by_size = candidate_relations(n, budget)
    max_size = len(by_size) - 1
    for sizes in _size_vectors(len(variables), max_size):
        pools = [by_size[s] for s in sizes]
        if any(not pool for pool in pools):
            continue
        for combo in product(*pools):
            rho = AssertEnv(n, dict(zip(variables, combo)))
            lhs_rel = _interpret(lhs, eta_key, rho, n, dom)
            rhs_rel = _interpret(rhs, eta_key, rho, n, dom)
            witness = _first_escapee(lhs_rel, rhs_rel)
            if witness is not None:
                return CounterexampleEnv(rho, witness)
    return None


def _first_escapee(lhs_rel: GenRel, rhs_rel: GenRel) -> HeapTuple | None:
    for gen in lhs_rel.sorted_generators():
        if not member(rhs_rel, gen):
            return gen
    return None


def env_candidate_count(num_vars: int, n: int, budget: SearchBudget) -> int:
    """Size of the environment space find_counter_env explores."""
    by_size = candidate_relations(n, budget)
    per_var = sum(len(group) for group in by_size)
    return per_var**num_vars


# --- parametricity condition -------------------------------------------------


@dataclass(frozen=True)
class PCWitness:
    heap: Heap
    parts: tuple[Heap, ...]  # one subheap per conjunct


@dataclass(frozen=True)
class PCVerdict:
    holds: bool
    witness: PCWitness | None = None
    combinations_checked: int = 0

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        if self.holds:
            return (
                "holds (bounded): no violating subheap family within "
                f"{self.combinations_checked} combinations"
            )
        w = self.witness
        parts = ", ".join(str(h) for h in w.parts)
        return f"fails: heap {w.heap} with conjunct subheaps ({parts})"


def _subheaps(h: Heap) -> list[Heap]:
    cells = h.cells
    out = []
    for size in range(len(cells) + 1):
        for chosen in combinations(cells, size):
            out.append(Heap(dict(chosen)))
    out.sort(key=Heap.sort_key)
    return out


def pc_check(
    form: ImplicationForm,
    eta: Mapping[str, int] | None,
    budget: SearchBudget = DEFAULT_BUDGET,
    dom: ValueDomain | None = None,
) -> PCVerdict:
    """Bounded check of the arity-independent validity condition.

    Fails yields a heap and per-conjunct subheaps witnessing that neither a
    count-dominated disjunct covers some subheap nor a variable-free disjunct
    covers the whole heap.  Holds is relative to the heap bound.
    """
    dom = dom or budget.domain()
    eta_key = _freeze_eta(eta)
    layout = compute_layout(form)
    conj_rels = [
        _interpret(c.base, eta_key, None, 1, dom) for c in form.conjuncts
    ]
    disj_rels = [
        _interpret(d.base, eta_key, None, 1, dom) for d in form.disjuncts
    ]
    dominated = [
        [
            j
            for j in range(layout.disjunct_count)
            if layout.edge(i, j).solid
        ]
        for i in range(layout.conjunct_count)
    ]
    empty_disjuncts = list(layout.empty_disjuncts)

    checked = 0
    for h in bounded_heaps(budget.max_loc, dom.values):
        part_choices = []
        for rel in conj_rels:
            parts = [sub for sub in _subheaps(h) if member(rel, (sub,))]
            if not parts:
                break
            part_choices.append(parts)
        else:
            whole_covered = any(
                member(disj_rels[j], (h,)) for j in empty_disjuncts
            )
            for parts in product(*part_choices):
                checked += 1
                if whole_covered:
                    continue
                if any(
                    member(disj_rels[j], (parts[i],))
                    for i in range(len(parts))
                    for j in dominated[i]
                ):
                    continue
                return PCVerdict(False, PCWitness(h, parts), checked)
    return PCVerdict(True, None, checked)
