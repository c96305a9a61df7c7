"""Independent oracles and generators shared by the tests.

Everything here deliberately avoids the package's automaton, shape and
matching machinery: membership is decided by naive substitution over
spans, captures by exhaustive span assignment, so that agreement with the
production code is meaningful.
"""

from __future__ import annotations

import random
from itertools import product

import ofskit as K


# --------------------------------------------------------------------------
# Naive membership: which end positions can an expression reach from i?

def _ends(model: K.OFSModel, expr, word, i, memo) -> frozenset[int]:
    key = (id(expr), i)
    if key in memo:
        return memo[key]
    if isinstance(expr, K.Epsilon):
        out = frozenset([i])
    elif isinstance(expr, K.Ref):
        out = _ends_label(model, expr.label, word, i, memo)
    elif isinstance(expr, K.Concat):
        positions = frozenset([i])
        for part in expr.parts:
            positions = frozenset(
                j for p in positions for j in _ends(model, part, word, p, memo))
        out = positions
    elif isinstance(expr, K.Alt):
        out = frozenset(
            j for part in expr.parts for j in _ends(model, part, word, i, memo))
    elif isinstance(expr, (K.Star, K.Plus)):
        reach = set()
        frontier = {i}
        while frontier:
            nxt = set()
            for p in frontier:
                for j in _ends(model, expr.inner, word, p, memo):
                    if j not in reach:
                        reach.add(j)
                        nxt.add(j)
            frontier = nxt
        if isinstance(expr, K.Star):
            reach.add(i)
        out = frozenset(reach)
    else:
        raise TypeError(expr)
    memo[key] = out
    return out


def _ends_label(model, label, word, i, memo) -> frozenset[int]:
    key = (label, i)
    if key in memo:
        return memo[key]
    rule = model.rule(label)
    if isinstance(rule.rhs, K.ObjectSet):
        out = frozenset(
            i + len(s) for s in rule.rhs.strings
            if word[i:i + len(s)] == s)
    else:
        out = _ends(model, rule.rhs, word, i, memo)
    memo[key] = out
    return out


def oracle_member(model, word) -> bool:
    """Membership by direct substitution, no automaton involved."""
    if isinstance(model, K.EmptyModel):
        return False
    word = tuple(word)
    memo: dict = {}
    return len(word) in _ends_label(model, model.top_rule.name.label, word, 0, memo)


def oracle_language(model, max_len, alphabet=None) -> set[tuple[str, ...]]:
    """All member words up to a token length, by exhaustive search."""
    if alphabet is None:
        alphabet = sorted(model.terminals)
    out = set()
    for n in range(max_len + 1):
        for word in product(alphabet, repeat=n):
            if oracle_member(model, word):
                out.add(word)
    return out


# --------------------------------------------------------------------------
# Naive capture collection: assign a span to every element.

def oracle_captures(former: K.SetFormer, datum, table: K.TokenClassTable):
    datum = tuple(datum)
    n = len(datum)
    results = set()

    def spans(elem, pos):
        if isinstance(elem, K.Lit):
            if pos < n and datum[pos] == elem.token:
                yield pos + 1
            return
        members = table.lookup(elem.cls)
        if elem.mult == "1":
            if pos < n and datum[pos] in members:
                yield pos + 1
            return
        if elem.mult == "*":
            yield pos
        j = pos
        while j < n and datum[j] in members:
            j += 1
            yield j

    for alternative in former.alternatives:
        elems = alternative.elements

        def assign(idx, pos, capture):
            if idx == len(elems):
                if pos == n and capture is not None:
                    results.add(capture)
                return
            elem = elems[idx]
            for end in spans(elem, pos):
                is_capture = isinstance(elem, K.Var) and elem.capture
                assign(idx + 1, end, datum[pos:end] if is_capture else capture)

        assign(0, 0, None)
    return frozenset(results)


# --------------------------------------------------------------------------
# Random model generation.

def random_object_set(rng: random.Random, alphabet, max_size=5, max_len=3,
                      allow_empty_string=True) -> K.ObjectSet:
    strings = set()
    for _ in range(rng.randint(1, max_size)):
        low = 0 if allow_empty_string else 1
        length = rng.randint(low, max_len)
        strings.add(tuple(rng.choice(alphabet) for _ in range(length)))
    return K.ObjectSet(frozenset(strings))


def random_expr(rng: random.Random, labels, depth=3):
    if depth == 0 or rng.random() < 0.35:
        return K.ref(rng.choice(labels))
    kind = rng.randint(0, 4)
    if kind == 0:
        return K.Concat(tuple(random_expr(rng, labels, depth - 1)
                              for _ in range(rng.randint(2, 3))))
    if kind == 1:
        return K.Alt(tuple(random_expr(rng, labels, depth - 1)
                           for _ in range(rng.randint(2, 3))))
    if kind == 2:
        return K.Star(random_expr(rng, labels, depth - 1))
    if kind == 3:
        return K.Plus(random_expr(rng, labels, depth - 1))
    return K.EPSILON


def random_model(rng: random.Random, *, max_classes=4, max_size=5, max_len=3,
                 alphabet=("a", "b")) -> K.OFSModel:
    """A small random valid model with non-empty level-0 sets."""
    n_classes = rng.randint(1, max_classes)
    labels = [f"C{i}" for i in range(n_classes)]
    level0 = tuple(
        K.Rule(K.ObjectName(0, label),
               random_object_set(rng, alphabet, max_size, max_len))
        for label in labels)
    levels = [level0]
    if rng.random() < 0.4 and n_classes >= 2:
        mids = [f"M{i}" for i in range(rng.randint(1, 2))]
        level1 = tuple(
            K.Rule(K.ObjectName(1, label), random_expr(rng, labels, depth=2))
            for label in mids)
        levels.append(level1)
        top_refs = labels + mids
        top_level = 2
    else:
        top_refs = labels
        top_level = 1
    top = K.Rule(K.ObjectName(top_level, "Top"), random_expr(rng, top_refs, depth=3))
    levels.append((top,))
    model = K.OFSModel("Random", frozenset(
        t for rule in level0 for t in rule.rhs.tokens()) | frozenset(alphabet),
        tuple(levels))
    assert K.validate_model(model) == []
    return model


def leaf_count(derivation: K.Derivation) -> int:
    if derivation.leaf is not None:
        return 1
    return sum(leaf_count(c) for c in derivation.children)
