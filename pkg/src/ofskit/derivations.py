"""Deterministic parsing of words into derivation trees.

The parser walks the inlined model shape directly rather than the compiled
automaton, which keeps it an independent route to membership: the two are
cross-checked in the test suite.
"""

from __future__ import annotations

from typing import Iterator

from .errors import InvalidModel, UnknownToken
from .model import Derivation, EmptyModel, OFSModel, validate_model
from .automaton import (
    SAlt,
    SConcat,
    SEps,
    SGroup,
    SPlus,
    SSlot,
    SStar,
    Shape,
    build_shape,
)


def parse(model: OFSModel | EmptyModel, word) -> Derivation | None:
    """One derivation of the word, or None when it is not in the language.

    The choice among derivations is fixed: alternation branches are tried
    in canonical order, leaf strings longest first at each position, and
    repetitions greedily.  Equal inputs always yield the same tree.
    """
    if isinstance(model, EmptyModel):
        return None
    violations = validate_model(model)
    if violations:
        raise InvalidModel(violations)
    word = tuple(word)
    for t in word:
        if t not in model.terminals:
            raise UnknownToken(f"token {t!r} is not a terminal of the model")

    shape, _slots = build_shape(model)
    n = len(word)

    def match(node: Shape, i: int) -> Iterator[tuple[int, tuple[Derivation, ...]]]:
        if isinstance(node, SEps):
            yield i, ()
        elif isinstance(node, SSlot):
            lengths = sorted({len(s) for s in node.strings.strings}, reverse=True)
            for length in lengths:
                if i + length > n:
                    continue
                piece = word[i:i + length]
                if piece in node.strings:
                    yield i + length, (Derivation(node.name, leaf=piece),)
        elif isinstance(node, SGroup):
            for j, frags in match(node.body, i):
                yield j, (Derivation(node.name, children=frags),)
        elif isinstance(node, SConcat):
            yield from match_seq(node.parts, 0, i)
        elif isinstance(node, SAlt):
            for part in node.parts:
                yield from match(part, i)
        elif isinstance(node, SStar):
            yield from match_star(node.inner, i)
        elif isinstance(node, SPlus):
            # First iteration may consume nothing; later ones must advance.
            for j, frags in match(node.inner, i):
                for j2, frags2 in match_star(node.inner, j):
                    yield j2, frags + frags2
        else:
            raise TypeError(f"not a shape node: {node!r}")

    def match_seq(parts, p, i):
        if p == len(parts):
            yield i, ()
            return
        for j, frags in match(parts[p], i):
            for j2, frags2 in match_seq(parts, p + 1, j):
                yield j2, frags + frags2

    def match_star(inner, i):
        for j, frags in match(inner, i):
            if j == i:
                continue
            for j2, frags2 in match_star(inner, j):
                yield j2, frags + frags2
        yield i, ()

    for j, frags in match(shape, 0):
        if j == n:
            return frags[0]
    return None
