"""Statistics, exact counting and bounded enumeration.

Counting is slot-based: the length parameter k counts level-0 leaves of a
derivation (syllables, in the word models), not tokens.  Derivation counts
weight every slot path by the product of its set sizes and therefore
double-count strings derivable in more than one way; distinct counts
deduplicate via determinization.  Both are exact big integers.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .automaton import Automaton, compile_model, replay_path, slot_glushkov, slot_paths, build_shape
from .errors import BudgetExceeded, InvalidModel, UnprunedModel
from .generalise import similarity
from .model import Derivation, EmptyModel, ObjectName, ObjectSet, OFSModel, validate_model

DEFAULT_STATE_BUDGET = 100_000
STATE_BUDGET_ENV = "OFSKIT_STATE_BUDGET"


def _require_pruned(model: OFSModel) -> None:
    violations = validate_model(model)
    if violations:
        raise InvalidModel(violations)
    for rule in model.level0_rules:
        if len(rule.rhs) == 0:
            raise UnprunedModel(f"level 0 set {rule.name.label!r} is empty")


# --------------------------------------------------------------------------
# Class statistics.

@dataclass(frozen=True)
class ClassRow:
    name: ObjectName
    size: int
    unique: int

    @property
    def unique_pct(self) -> Fraction:
        return Fraction(self.unique, self.size)


@dataclass(frozen=True)
class ClassStats:
    rows: tuple[ClassRow, ...]
    total_size: int
    total_unique: int

    @property
    def total_pct(self) -> Fraction:
        return Fraction(self.total_unique, self.total_size)


def class_stats(model: OFSModel) -> ClassStats:
    """Set sizes and per-class unique membership counts.

    A string is unique to a class when it belongs to no other class; the
    totals row reports the universe (the union of all classes) and the
    number of strings unique to any single class.
    """
    _require_pruned(model)
    rules = sorted(model.level0_rules, key=lambda r: r.name.label)
    rows = []
    for rule in rules:
        others: set = set()
        for other in rules:
            if other is not rule:
                others |= other.rhs.strings
        unique = len(rule.rhs.strings - others)
        rows.append(ClassRow(rule.name, len(rule.rhs), unique))
    universe = frozenset().union(*(r.rhs.strings for r in rules))
    return ClassStats(tuple(rows), len(universe), sum(r.unique for r in rows))


@dataclass(frozen=True)
class PairRow:
    a: ObjectName
    b: ObjectName
    intersection: int
    similarity: Fraction


@dataclass(frozen=True)
class IntersectionTable:
    rows: tuple[PairRow, ...]


def intersection_table(model: OFSModel) -> IntersectionTable:
    """Pairwise intersection sizes and similarities of the level-0 sets."""
    _require_pruned(model)
    rules = sorted(model.level0_rules, key=lambda r: r.name.label)
    rows = []
    for i, a in enumerate(rules):
        for b in rules[i + 1:]:
            inter = len(a.rhs.strings & b.rhs.strings)
            rows.append(PairRow(a.name, b.name, inter, similarity(a.rhs, b.rhs)))
    return IntersectionTable(tuple(rows))


# --------------------------------------------------------------------------
# Counting.

def count_derivations(model: OFSModel | EmptyModel, k: int) -> int:
    """Number of derivations with exactly k leaves.

    Computed by dynamic programming over the slot position automaton: the
    count is the sum over slot paths of length k of the product of the
    sets' sizes along the path.  Exact at any magnitude.
    """
    if isinstance(model, EmptyModel):
        return 0
    if k < 0:
        raise ValueError("k must be non-negative")
    _require_pruned(model)
    shape, slots = build_shape(model)
    g = slot_glushkov(shape)
    if k == 0:
        return 1 if g.nullable else 0
    size = {slot.occ: len(slot.strings) for slot in slots}
    current = {occ: size[occ] for occ in g.first}
    for _ in range(k - 1):
        nxt: dict[int, int] = {}
        for occ, weight in current.items():
            for succ in g.follow[occ]:
                nxt[succ] = nxt.get(succ, 0) + weight * size[succ]
        current = nxt
        if not current:
            return 0
    return sum(weight for occ, weight in current.items() if occ in g.last_set)


def _state_budget(state_budget: int | None) -> int:
    if state_budget is not None:
        return state_budget
    env = os.environ.get(STATE_BUDGET_ENV)
    return int(env) if env else DEFAULT_STATE_BUDGET


def count_distinct(model: OFSModel | EmptyModel, k: int, *,
                   state_budget: int | None = None) -> int:
    """Number of distinct terminal strings derivable with exactly k leaves.

    The slot-annotated automaton is determinized with the leaf count folded
    into the subset construction; distinct strings are then paths of the
    resulting acyclic machine.  Raises BudgetExceeded when determinization
    grows past the state budget (configurable via OFSKIT_STATE_BUDGET).
    """
    if isinstance(model, EmptyModel):
        return 0
    if k < 0:
        raise ValueError("k must be non-negative")
    budget = _state_budget(state_budget)
    auto = compile_model(model)

    def closure(pairs: set[tuple[int, int]]) -> frozenset[tuple[int, int]]:
        stack = list(pairs)
        seen = set(pairs)
        while stack:
            state, c = stack.pop()
            nc = c + 1
            if nc > k:
                continue
            for nxt in auto.eps[state]:
                if (nxt, nc) not in seen:
                    seen.add((nxt, nc))
                    stack.append((nxt, nc))
        return frozenset(seen)

    def is_accepting(subset: frozenset[tuple[int, int]]) -> bool:
        return any(state in auto.accepting and c == k for state, c in subset)

    start = closure({(0, 0)})
    transitions: dict[frozenset, dict[str, frozenset]] = {}
    order: list[frozenset] = [start]
    seen = {start}
    i = 0
    while i < len(order):
        subset = order[i]
        i += 1
        moves: dict[str, set[tuple[int, int]]] = {}
        for state, c in subset:
            for token, targets in auto.tok[state].items():
                bucket = moves.setdefault(token, set())
                for t in targets:
                    bucket.add((t, c))
        row = {}
        for token in sorted(moves):
            nxt = closure(moves[token])
            row[token] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                if len(seen) > budget:
                    raise BudgetExceeded(budget)
        transitions[subset] = row
    # Each DFA path from the start spells a distinct string; leaf counts only
    # ever grow along edges, so the reachable graph is acyclic and paths can
    # be counted by memoized descent.
    memo: dict[frozenset, int] = {}
    on_stack: set[int] = set()

    def paths(subset: frozenset) -> int:
        key = subset
        if key in memo:
            return memo[key]
        if id(subset) in on_stack:
            raise AssertionError("cycle in determinized slot automaton")
        on_stack.add(id(subset))
        total = 1 if is_accepting(subset) else 0
        for token in sorted(transitions[subset]):
            total += paths(transitions[subset][token])
        on_stack.discard(id(subset))
        memo[key] = total
        return total

    return paths(start)


# --------------------------------------------------------------------------
# Enumeration.

def enumerate_derivations(model: OFSModel | EmptyModel, max_k: int) -> Iterator[tuple[tuple[str, ...], Derivation]]:
    """Every derivation with at most max_k leaves, exactly once.

    Ordered by leaf count ascending, then by the derived word, then by a
    fixed tree order.  Derivations are identified with accepting slot paths
    plus a leaf choice per slot, so duplicated rule branches yield separate
    derivations but nested repetitions do not double-count.
    """
    if isinstance(model, EmptyModel):
        return
    _require_pruned(model)
    shape, slots = build_shape(model)
    g = slot_glushkov(shape)
    for k in range(0, max_k + 1):
        batch: list[tuple[tuple[str, ...], Derivation]] = []
        for path in slot_paths(g, k):
            choices = [slots[occ].strings.sorted_strings() for occ in path]
            def emit(idx: int, entries: list[tuple[int, tuple[str, ...]]]):
                if idx == len(path):
                    deriv = replay_path(shape, entries)
                    batch.append((deriv.word(), deriv))
                    return
                for leaf in choices[idx]:
                    entries.append((path[idx], leaf))
                    emit(idx + 1, entries)
                    entries.pop()
            emit(0, [])
        batch.sort(key=lambda item: (item[0], item[1].sort_key()))
        yield from batch


# --------------------------------------------------------------------------
# Count reports.

@dataclass(frozen=True)
class CountRow:
    k: int
    derivations: int
    distinct: int | None = None


@dataclass(frozen=True)
class CountReport:
    rows: tuple[CountRow, ...]


def count_report(model: OFSModel | EmptyModel, ks, *, distinct: bool = False,
                 state_budget: int | None = None) -> CountReport:
    rows = []
    for k in ks:
        rows.append(CountRow(
            k,
            count_derivations(model, k),
            count_distinct(model, k, state_budget=state_budget) if distinct else None,
        ))
    return CountReport(tuple(rows))
