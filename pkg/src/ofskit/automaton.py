"""Compilation of models to finite automata.

The construction inlines the rule stack into a single expression whose
atoms are level-0 object occurrences (slots), computes first/last/follow
sets over those occurrences, and then expands each slot into a trie of
its string set.  Keeping slots as the atoms preserves provenance: any
accepting run decomposes the input into one leaf per slot visited, from
which a full derivation can be rebuilt.

Slots are the unit of counting throughout: a derivation with k leaves
corresponds to a path visiting k slot occurrences, whether or not some
leaves are the empty string.  Empty leaves are realized as epsilon moves
that still pass through the slot's entry state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import InvalidModel, UnknownToken
from .model import (
    Alt,
    Concat,
    Derivation,
    EPSILON,
    Epsilon,
    Expr,
    ObjectName,
    ObjectSet,
    OFSModel,
    Plus,
    Ref,
    Star,
    canonicalize_model,
    validate_model,
)


# --------------------------------------------------------------------------
# Shape tree: the model inlined down to level-0 slots.

class Shape:
    __slots__ = ()


@dataclass(frozen=True)
class SEps(Shape):
    pass


@dataclass(frozen=True)
class SSlot(Shape):
    occ: int
    name: ObjectName
    strings: ObjectSet


@dataclass(frozen=True)
class SGroup(Shape):
    name: ObjectName
    body: Shape


@dataclass(frozen=True)
class SConcat(Shape):
    parts: tuple[Shape, ...]


@dataclass(frozen=True)
class SAlt(Shape):
    parts: tuple[Shape, ...]


@dataclass(frozen=True)
class SStar(Shape):
    inner: Shape


@dataclass(frozen=True)
class SPlus(Shape):
    inner: Shape


def build_shape(model: OFSModel) -> tuple[Shape, list[SSlot]]:
    """Inline a valid model into a shape tree; returns (root, slots by occ).

    The canonicalized rule bodies are used, so alternation branches appear
    in canonical order and every occurrence of a lower-level rule becomes
    its own subtree.
    """
    model = canonicalize_model(model)
    slots: list[SSlot] = []

    def expand(expr: Expr) -> Shape:
        if isinstance(expr, Epsilon):
            return SEps()
        if isinstance(expr, Ref):
            rule = model.rule(expr.label)
            if isinstance(rule.rhs, ObjectSet):
                slot = SSlot(len(slots), rule.name, rule.rhs)
                slots.append(slot)
                return slot
            return SGroup(rule.name, expand(rule.rhs))
        if isinstance(expr, Concat):
            return SConcat(tuple(expand(p) for p in expr.parts))
        if isinstance(expr, Alt):
            return SAlt(tuple(expand(p) for p in expr.parts))
        if isinstance(expr, Star):
            return SStar(expand(expr.inner))
        if isinstance(expr, Plus):
            return SPlus(expand(expr.inner))
        raise TypeError(f"not an expression: {expr!r}")

    top = model.top_rule
    if isinstance(top.rhs, ObjectSet):
        slot = SSlot(0, top.name, top.rhs)
        slots.append(slot)
        return slot, slots
    return SGroup(top.name, expand(top.rhs)), slots


# --------------------------------------------------------------------------
# Position sets over slot occurrences.

@dataclass(frozen=True)
class Glushkov:
    nullable: bool
    first: tuple[int, ...]
    last: tuple[int, ...]
    follow: dict[int, tuple[int, ...]]

    @property
    def last_set(self) -> frozenset[int]:
        return frozenset(self.last)


def slot_glushkov(shape: Shape) -> Glushkov:
    """first/last/follow over slot occurrences; slots are never nullable
    (crossing a slot with an empty leaf still visits it)."""
    follow: dict[int, set[int]] = {}

    def walk(node: Shape) -> tuple[bool, set[int], set[int]]:
        if isinstance(node, SEps):
            return True, set(), set()
        if isinstance(node, SSlot):
            follow.setdefault(node.occ, set())
            return False, {node.occ}, {node.occ}
        if isinstance(node, SGroup):
            return walk(node.body)
        if isinstance(node, SConcat):
            nullable = True
            first: set[int] = set()
            open_last: set[int] = set()
            for part in node.parts:
                n, f, l = walk(part)
                for s in open_last:
                    follow[s].update(f)
                if nullable:
                    first |= f
                if n:
                    open_last |= l
                else:
                    open_last = set(l)
                nullable = nullable and n
            return nullable, first, open_last
        if isinstance(node, SAlt):
            nullable = False
            first: set[int] = set()
            last: set[int] = set()
            for part in node.parts:
                n, f, l = walk(part)
                nullable = nullable or n
                first |= f
                last |= l
            return nullable, first, last
        if isinstance(node, (SStar, SPlus)):
            n, f, l = walk(node.inner)
            for s in l:
                follow[s].update(f)
            return (True if isinstance(node, SStar) else n), f, l
        raise TypeError(f"not a shape node: {node!r}")

    nullable, first, last = walk(shape)
    return Glushkov(
        nullable,
        tuple(sorted(first)),
        tuple(sorted(last)),
        {occ: tuple(sorted(s)) for occ, s in follow.items()},
    )


def slot_paths(g: Glushkov, k: int) -> Iterator[tuple[int, ...]]:
    """All occurrence paths of exactly k slots, in lexicographic order."""
    if k == 0:
        if g.nullable:
            yield ()
        return
    last = g.last_set
    path: list[int] = []

    def extend() -> Iterator[tuple[int, ...]]:
        if len(path) == k:
            if path[-1] in last:
                yield tuple(path)
            return
        for nxt in g.follow[path[-1]]:
            path.append(nxt)
            yield from extend()
            path.pop()

    for s in g.first:
        path.append(s)
        yield from extend()
        path.pop()


# --------------------------------------------------------------------------
# Replaying an occurrence path into a derivation tree.

def replay_path(shape: Shape, entries: list[tuple[int, tuple[str, ...]]]) -> Derivation:
    """Rebuild a derivation from a slot path with chosen leaves.

    ``entries`` pairs each visited occurrence with its leaf string.  When
    nested repetitions make the grouping ambiguous, iterations consume as
    much of the path as possible, which fixes one deterministic tree.
    """

    def match(node: Shape, idx: int) -> Iterator[tuple[int, tuple[Derivation, ...]]]:
        if isinstance(node, SEps):
            yield idx, ()
        elif isinstance(node, SSlot):
            if idx < len(entries) and entries[idx][0] == node.occ:
                yield idx + 1, (Derivation(node.name, leaf=entries[idx][1]),)
        elif isinstance(node, SGroup):
            for j, frags in match(node.body, idx):
                yield j, (Derivation(node.name, children=frags),)
        elif isinstance(node, SConcat):
            yield from match_seq(node.parts, 0, idx)
        elif isinstance(node, SAlt):
            for part in node.parts:
                yield from match(part, idx)
        elif isinstance(node, SStar):
            yield from match_star(node.inner, idx)
        elif isinstance(node, SPlus):
            for j, frags in match(node.inner, idx):
                for j2, frags2 in match_star(node.inner, j):
                    yield j2, frags + frags2
        else:
            raise TypeError(f"not a shape node: {node!r}")

    def match_seq(parts, p, idx):
        if p == len(parts):
            yield idx, ()
            return
        for j, frags in match(parts[p], idx):
            for j2, frags2 in match_seq(parts, p + 1, j):
                yield j2, frags + frags2

    def match_star(inner, idx):
        for j, frags in match(inner, idx):
            if j == idx:
                continue
            for j2, frags2 in match_star(inner, j):
                yield j2, frags + frags2
        yield idx, ()

    for j, frags in match(shape, 0):
        if j == len(entries):
            if len(frags) == 1:
                return frags[0]
            break
    raise ValueError("occurrence path does not fit the model shape")


# --------------------------------------------------------------------------
# The compiled automaton.

class _Trie:
    __slots__ = ("edges", "accept")

    def __init__(self, strings: ObjectSet):
        self.edges: list[dict[str, int]] = [{}]
        self.accept: set[int] = set()
        for s in strings.sorted_strings():
            if not s:
                continue
            node = 0
            for tok in s:
                nxt = self.edges[node].get(tok)
                if nxt is None:
                    self.edges.append({})
                    nxt = len(self.edges) - 1
                    self.edges[node][tok] = nxt
                node = nxt
            self.accept.add(node)


@dataclass
class Automaton:
    """Epsilon-NFA over tokens with slot-entry provenance.

    State 0 is the start.  Every epsilon edge targets the entry state of a
    slot occurrence, so slot visits (and therefore leaf counts) can be read
    off any run.  Accepting states are slot completions.
    """

    terminals: frozenset[str]
    shape: Shape
    slots: list[SSlot]
    glushkov: Glushkov
    eps: list[tuple[int, ...]]
    tok: list[dict[str, tuple[int, ...]]]
    accepting: frozenset[int]
    enter_occ: dict[int, int]
    state_occ: dict[int, int]

    @property
    def n_states(self) -> int:
        return len(self.eps)

    def occ_name(self, occ: int) -> ObjectName:
        return self.slots[occ].name

    def _check_tokens(self, word) -> None:
        for t in word:
            if t not in self.terminals:
                raise UnknownToken(f"token {t!r} is not a terminal of the model")

    def _closure(self, states: set[int]) -> set[int]:
        stack = list(states)
        seen = set(states)
        while stack:
            s = stack.pop()
            for nxt in self.eps[s]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    def accepts(self, word) -> bool:
        """True iff the token sequence is in the model's language."""
        word = tuple(word)
        self._check_tokens(word)
        frontier = self._closure({0})
        for t in word:
            step: set[int] = set()
            for s in frontier:
                step.update(self.tok[s].get(t, ()))
            if not step:
                return False
            frontier = self._closure(step)
        return any(s in self.accepting for s in frontier)

    def _provenance_occs(self, word) -> list[tuple[int, tuple[str, ...]]] | None:
        word = tuple(word)
        self._check_tokens(word)
        dead: set[tuple[int, int]] = set()
        events: list[tuple[str, object]] = []

        def dfs(state: int, pos: int) -> bool:
            if (state, pos) in dead:
                return False
            if pos == len(word) and state in self.accepting:
                return True
            if pos < len(word):
                for nxt in self.tok[state].get(word[pos], ()):
                    events.append(("tok", word[pos]))
                    if dfs(nxt, pos + 1):
                        return True
                    events.pop()
            for nxt in self.eps[state]:
                events.append(("enter", self.enter_occ[nxt]))
                if dfs(nxt, pos):
                    return True
                events.pop()
            dead.add((state, pos))
            return False

        if not dfs(0, 0):
            return None
        out: list[tuple[int, list[str]]] = []
        for kind, payload in events:
            if kind == "enter":
                out.append((payload, []))
            else:
                out[-1][1].append(payload)
        return [(occ, tuple(leaf)) for occ, leaf in out]

    def provenance(self, word) -> list[tuple[ObjectName, tuple[str, ...]]] | None:
        """One accepting decomposition of the word into (object, leaf)
        segments, or None when the word is rejected.  Leaves chosen as the
        empty string appear with an empty tuple."""
        occs = self._provenance_occs(word)
        if occs is None:
            return None
        return [(self.occ_name(occ), leaf) for occ, leaf in occs]

    def derivation(self, word) -> Derivation | None:
        """A full derivation rebuilt from provenance, or None if rejected."""
        occs = self._provenance_occs(word)
        if occs is None:
            return None
        return replay_path(self.shape, occs)


def compile_model(model: OFSModel) -> Automaton:
    """Compile a valid model with non-empty level-0 sets into an automaton."""
    violations = validate_model(model)
    if violations:
        raise InvalidModel(violations)
    for rule in model.level0_rules:
        if len(rule.rhs) == 0:
            raise InvalidModel([], message=f"level 0 set {rule.name.label!r} is empty; prune first")

    shape, slots = build_shape(model)
    g = slot_glushkov(shape)

    eps: list[set[int]] = [set()]
    tok: list[dict[str, list[int]]] = [{}]
    enter: dict[int, int] = {}
    enter_occ: dict[int, int] = {}
    state_occ: dict[int, int] = {}

    def new_state(occ: int | None) -> int:
        eps.append(set())
        tok.append({})
        sid = len(eps) - 1
        if occ is not None:
            state_occ[sid] = occ
        return sid

    for slot in slots:
        sid = new_state(slot.occ)
        enter[slot.occ] = sid
        enter_occ[sid] = slot.occ

    accepting: set[int] = set()
    last = g.last_set
    for slot in slots:
        trie = _Trie(slot.strings)
        node_state = {0: enter[slot.occ]}
        for node in range(1, len(trie.edges)):
            node_state[node] = new_state(slot.occ)
        for node, edges in enumerate(trie.edges):
            src = node_state[node]
            for t, child in edges.items():
                tok[src].setdefault(t, []).append(node_state[child])
        completions = [node_state[n] for n in sorted(trie.accept)]
        if () in slot.strings:
            completions.append(enter[slot.occ])
        for t in g.follow.get(slot.occ, ()):
            for c in completions:
                eps[c].add(enter[t])
        if slot.occ in last:
            accepting.update(completions)

    for s in g.first:
        eps[0].add(enter[s])
    if g.nullable:
        accepting.add(0)

    return Automaton(
        terminals=model.terminals,
        shape=shape,
        slots=slots,
        glushkov=g,
        eps=[tuple(sorted(s)) for s in eps],
        tok=[{t: tuple(v) for t, v in d.items()} for d in tok],
        accepting=frozenset(accepting),
        enter_occ=enter_occ,
        state_occ=state_occ,
    )
