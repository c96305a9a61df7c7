"""Turning prototype models plus data into fully specified models.

A prototype looks like a model except that its level-0 rules carry
set-former patterns instead of string sets.  Instantiation evaluates each
former over every datum and unions the captures; pruning then removes
rules that can never derive anything.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Union

from .corpus import WordForm
from .errors import EmptyCorpus, InvalidModel
from .model import (
    Alt,
    Concat,
    EPSILON,
    Epsilon,
    EmptyModel,
    Expr,
    ObjectName,
    ObjectSet,
    OFSModel,
    Plus,
    RESERVED,
    Ref,
    Rule,
    Star,
    canonicalize,
    validate_model,
)
from .patterns import SetFormer, TokenClassTable, match_captures


@dataclass(frozen=True)
class PrototypeModel:
    """A model whose level-0 right-hand sides await data.

    ``classes`` is the token class table the patterns are matched against;
    it may be attached after loading (the prototype file itself is
    alphabet-independent).
    """

    name: str
    levels: tuple[tuple[Rule, ...], ...]
    classes: TokenClassTable | None = None

    @property
    def level_count(self) -> int:
        return len(self.levels)

    @property
    def level0_rules(self) -> tuple[Rule, ...]:
        return self.levels[0]

    def with_classes(self, classes: TokenClassTable) -> "PrototypeModel":
        return replace(self, classes=classes)


Datum = Union[WordForm, Sequence[str]]


def _as_datum(item: Datum) -> tuple[str, ...]:
    if isinstance(item, WordForm):
        return item.datum()
    return tuple(item)


def instantiate(proto: PrototypeModel, data: Iterable[Datum], *,
                classes: TokenClassTable | None = None) -> OFSModel | EmptyModel:
    """Fill the prototype's level-0 sets from the data, then prune.

    Each level-0 set becomes the union over all data of the captures of its
    former; rules above level 0 are copied verbatim.  The terminals of the
    result are the tokens observed in the data minus the reserved markers.
    """
    table = classes or proto.classes
    if table is None:
        raise ValueError("no token class table attached to the prototype")
    data = [_as_datum(item) for item in data]
    if not data:
        raise EmptyCorpus("instantiation requires at least one datum")

    terminals = {t for datum in data for t in datum} - RESERVED
    levels: list[tuple[Rule, ...]] = []
    level0 = []
    for rule in proto.level0_rules:
        former = rule.rhs
        if not isinstance(former, SetFormer):
            raise TypeError(f"level 0 rule {rule.name.label!r} does not carry a set former")
        collected: set[tuple[str, ...]] = set()
        for datum in data:
            collected |= match_captures(former, datum, table)
        level0.append(Rule(rule.name, ObjectSet(frozenset(collected))))
    levels.append(tuple(level0))
    for rules in proto.levels[1:]:
        levels.append(tuple(rules))

    model = OFSModel(proto.name, frozenset(terminals), tuple(levels))
    pruned = prune(model)
    if isinstance(pruned, OFSModel):
        violations = validate_model(pruned)
        if violations:
            raise InvalidModel(violations, message="instantiation produced an invalid model")
    return pruned


class _Dead:
    """Sentinel for subexpressions that can no longer derive anything."""


_DEAD = _Dead()


def _strip_dead(expr: Expr, alive: set[str]):
    if isinstance(expr, Epsilon):
        return expr
    if isinstance(expr, Ref):
        return expr if expr.label in alive else _DEAD
    if isinstance(expr, Concat):
        parts = [_strip_dead(p, alive) for p in expr.parts]
        if any(p is _DEAD for p in parts):
            return _DEAD
        return Concat(tuple(parts))
    if isinstance(expr, Alt):
        parts = [p for p in (_strip_dead(q, alive) for q in expr.parts) if p is not _DEAD]
        if not parts:
            return _DEAD
        return Alt(tuple(parts))
    if isinstance(expr, Star):
        inner = _strip_dead(expr.inner, alive)
        # Zero repetitions stay derivable even when the body is dead.
        return EPSILON if inner is _DEAD else Star(inner)
    if isinstance(expr, Plus):
        inner = _strip_dead(expr.inner, alive)
        return _DEAD if inner is _DEAD else Plus(inner)
    raise TypeError(f"not an expression: {expr!r}")


def prune(model: OFSModel) -> OFSModel | EmptyModel:
    """Remove empty level-0 rules and everything that relied on them.

    Alternation branches containing a dead reference are dropped branch by
    branch; a rule dies only when its whole right-hand side does.  A dead
    body under Star is replaced by epsilon since zero repetitions survive.
    The result is unchanged by further pruning.
    """
    alive: set[str] = set()
    levels: list[tuple[Rule, ...]] = []

    kept0 = []
    for rule in model.levels[0]:
        if isinstance(rule.rhs, ObjectSet) and len(rule.rhs) == 0:
            continue
        kept0.append(rule)
        alive.add(rule.name.label)
    levels.append(tuple(kept0))

    for rules in model.levels[1:]:
        kept = []
        for rule in rules:
            rhs = _strip_dead(rule.rhs, alive)
            if rhs is _DEAD:
                continue
            if rhs != rule.rhs:
                rhs = canonicalize(rhs)
            kept.append(Rule(rule.name, rhs))
            alive.add(rule.name.label)
        levels.append(tuple(kept))

    if not levels[-1]:
        return EmptyModel(model.name)
    return OFSModel(model.name, model.terminals, tuple(levels))
