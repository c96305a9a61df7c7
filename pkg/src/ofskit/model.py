"""Core model types: leveled rule systems over token strings.

A model is a stack of rule sets indexed 0..n.  Rules above level 0 rewrite
a name into a regular expression over names defined at strictly lower
levels; rules at level 0 rewrite a name into a finite set of token strings.
The top rule set is a singleton holding the start symbol, so every model
denotes a regular language and every derivation is a tree of bounded depth.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Union

SEPARATOR = "-"
STRESS = "'"
RESERVED = frozenset((SEPARATOR, STRESS))

_LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_label(text: str) -> bool:
    return bool(_LABEL_RE.match(text))


def is_token(text: str) -> bool:
    """A token is a non-empty string with no whitespace, quote or hash."""
    if not text:
        return False
    if any(c.isspace() for c in text):
        return False
    return '"' not in text and "#" not in text


@dataclass(frozen=True, order=True)
class ObjectName:
    """Identity of a rule: its level index plus a label unique in the model."""

    level: int
    label: str


# --------------------------------------------------------------------------
# Regular expressions over object names.

class Expr:
    """Base class for rule right-hand sides above level 0."""

    __slots__ = ()


@dataclass(frozen=True)
class Epsilon(Expr):
    pass


EPSILON = Epsilon()


@dataclass(frozen=True)
class Ref(Expr):
    label: str


@dataclass(frozen=True)
class Concat(Expr):
    parts: tuple[Expr, ...]


@dataclass(frozen=True)
class Alt(Expr):
    parts: tuple[Expr, ...]


@dataclass(frozen=True)
class Star(Expr):
    inner: Expr


@dataclass(frozen=True)
class Plus(Expr):
    inner: Expr


def ref(label: str) -> Ref:
    return Ref(label)


def cat(*parts: Expr) -> Expr:
    return Concat(tuple(parts)) if len(parts) != 1 else parts[0]


def alt(*parts: Expr) -> Expr:
    return Alt(tuple(parts)) if len(parts) != 1 else parts[0]


def star(inner: Expr) -> Star:
    return Star(inner)


def plus(inner: Expr) -> Plus:
    return Plus(inner)


def refs(expr: Expr) -> Iterator[str]:
    """All labels referenced anywhere in the expression, in syntax order."""
    if isinstance(expr, Ref):
        yield expr.label
    elif isinstance(expr, (Concat, Alt)):
        for part in expr.parts:
            yield from refs(part)
    elif isinstance(expr, (Star, Plus)):
        yield from refs(expr.inner)


def expr_key(expr: Expr):
    """A total order on expressions, used to sort alternation branches."""
    if isinstance(expr, Epsilon):
        return (0,)
    if isinstance(expr, Ref):
        return (1, expr.label)
    if isinstance(expr, Star):
        return (2, expr_key(expr.inner))
    if isinstance(expr, Plus):
        return (3, expr_key(expr.inner))
    if isinstance(expr, Concat):
        return (4, tuple(expr_key(p) for p in expr.parts))
    if isinstance(expr, Alt):
        return (5, tuple(expr_key(p) for p in expr.parts))
    raise TypeError(f"not an expression: {expr!r}")


def canonicalize(expr: Expr) -> Expr:
    """Normalize an expression without changing its language.

    Nested concatenations and alternations are flattened, alternation
    branches are deduplicated and sorted under a fixed total order,
    epsilon factors are dropped from concatenations, and repetition
    operators are collapsed where stacking them is redundant
    (``e**``, ``e*+``, ``e+*`` all become ``e*``).  ``Plus`` is kept
    distinct from ``Star``.  The result is a fixpoint: canonicalizing
    twice gives the same expression.
    """
    if isinstance(expr, (Epsilon, Ref)):
        return expr
    if isinstance(expr, (Star, Plus)):
        inner = canonicalize(expr.inner)
        if isinstance(inner, Epsilon):
            return EPSILON
        if isinstance(inner, Star):
            return inner
        if isinstance(inner, Plus):
            # (e+)* and (e+)+ simplify; only the latter keeps Plus.
            return Plus(inner.inner) if isinstance(expr, Plus) else Star(inner.inner)
        return Star(inner) if isinstance(expr, Star) else Plus(inner)
    if isinstance(expr, Concat):
        parts = []
        for part in expr.parts:
            part = canonicalize(part)
            if isinstance(part, Epsilon):
                continue
            if isinstance(part, Concat):
                parts.extend(part.parts)
            else:
                parts.append(part)
        if not parts:
            return EPSILON
        if len(parts) == 1:
            return parts[0]
        return Concat(tuple(parts))
    if isinstance(expr, Alt):
        flat = []
        for part in expr.parts:
            part = canonicalize(part)
            if isinstance(part, Alt):
                flat.extend(part.parts)
            else:
                flat.append(part)
        if not flat:
            raise ValueError("empty alternation has no canonical form")
        unique = sorted(set(flat), key=expr_key)
        if len(unique) == 1:
            return unique[0]
        return Alt(tuple(unique))
    raise TypeError(f"not an expression: {expr!r}")


# --------------------------------------------------------------------------
# Level-0 string sets.

@dataclass(frozen=True)
class ObjectSet:
    """A finite set of token strings; the empty string is permitted."""

    strings: frozenset[tuple[str, ...]]

    @classmethod
    def of(cls, items) -> "ObjectSet":
        out = set()
        for item in items:
            out.add(tuple(item))
        return cls(frozenset(out))

    def __len__(self) -> int:
        return len(self.strings)

    def __contains__(self, item) -> bool:
        return tuple(item) in self.strings

    def __iter__(self):
        return iter(self.strings)

    def sorted_strings(self) -> list[tuple[str, ...]]:
        return sorted(self.strings)

    def tokens(self) -> frozenset[str]:
        return frozenset(t for s in self.strings for t in s)

    def union(self, other: "ObjectSet") -> "ObjectSet":
        return ObjectSet(self.strings | other.strings)


@dataclass(frozen=True)
class Rule:
    name: ObjectName
    rhs: Union[Expr, ObjectSet]


@dataclass(frozen=True)
class Derivation:
    """A bracketed derivation tree.

    Internal nodes carry the name of the rule that was expanded; nodes for
    level-0 rules carry the chosen token string in ``leaf`` (possibly the
    empty string) and have no children.  Concatenating the leaves left to
    right yields the derived word.
    """

    name: ObjectName
    children: tuple["Derivation", ...] = ()
    leaf: tuple[str, ...] | None = None

    def word(self) -> tuple[str, ...]:
        if self.leaf is not None:
            return self.leaf
        out: list[str] = []
        for child in self.children:
            out.extend(child.word())
        return tuple(out)

    def depth(self) -> int:
        if not self.children:
            return 1
        return 1 + max(c.depth() for c in self.children)

    def bracket(self) -> str:
        """Render as a bracketed string, empty leaves shown as a dot."""
        if self.leaf is not None:
            body = " ".join(self.leaf) if self.leaf else "."
            return f"({self.name.label} {body})"
        inner = " ".join(c.bracket() for c in self.children)
        return f"({self.name.label} {inner})" if inner else f"({self.name.label})"

    def sort_key(self):
        if self.leaf is not None:
            return (0, self.name.label, self.leaf)
        return (1, self.name.label, tuple(c.sort_key() for c in self.children))


@dataclass(frozen=True)
class OFSModel:
    """A validated-on-demand leveled rule system.

    ``levels[i]`` holds the rules of level i; ``levels[-1]`` is the top
    rule set and must be a singleton.  ``level_count`` is the number of
    levels, i.e. the top level index plus one.
    """

    name: str
    terminals: frozenset[str]
    levels: tuple[tuple[Rule, ...], ...]

    @property
    def level_count(self) -> int:
        return len(self.levels)

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    @property
    def top_rule(self) -> Rule:
        return self.levels[-1][0]

    @cached_property
    def rules_by_label(self) -> dict[str, Rule]:
        out = {}
        for rules in self.levels:
            for rule in rules:
                out.setdefault(rule.name.label, rule)
        return out

    def rule(self, label: str) -> Rule:
        return self.rules_by_label[label]

    @property
    def level0_rules(self) -> tuple[Rule, ...]:
        return self.levels[0]

    def object_names(self) -> list[ObjectName]:
        return [r.name for rules in self.levels for r in rules]


@dataclass(frozen=True)
class EmptyModel:
    """Distinguished result of pruning away the start rule; denotes the
    empty language."""

    name: str


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    name: ObjectName | None = None

    def __str__(self) -> str:
        where = f" [{self.name.label}@{self.name.level}]" if self.name else ""
        return f"{self.code}: {self.message}{where}"


def validate_model(model: OFSModel) -> list[Violation]:
    """Check every structural invariant; an empty report means valid.

    Violations are data, not faults: a report is produced even for badly
    broken models so that all problems surface at once.
    """
    out: list[Violation] = []
    if not model.levels:
        return [Violation("no-levels", "model has no levels")]

    seen: dict[str, ObjectName] = {}
    for i, rules in enumerate(model.levels):
        for rule in rules:
            name = rule.name
            if not is_label(name.label):
                out.append(Violation("bad-label", f"label {name.label!r} is not an identifier", name))
            if name.level != i:
                out.append(Violation("level-mismatch",
                                     f"rule stored at level {i} carries level {name.level}", name))
            if name.label in seen:
                out.append(Violation("duplicate-lhs",
                                     f"label {name.label!r} defined more than once", name))
            else:
                seen[name.label] = name
            if i == 0 and not isinstance(rule.rhs, ObjectSet):
                out.append(Violation("rhs-kind", "level 0 rule must carry a string set", name))
            if i > 0 and not isinstance(rule.rhs, Expr):
                out.append(Violation("rhs-kind", f"level {i} rule must carry an expression", name))

    top = model.levels[-1]
    if len(top) != 1:
        out.append(Violation("top-singleton",
                             f"top level must hold exactly one rule, found {len(top)}"))

    for i, rules in enumerate(model.levels):
        if i == 0:
            continue
        for rule in rules:
            if not isinstance(rule.rhs, Expr):
                continue
            for label in refs(rule.rhs):
                target = seen.get(label)
                if target is None:
                    out.append(Violation("unknown-ref",
                                         f"reference to undefined object {label!r}", rule.name))
                elif target.level >= i:
                    out.append(Violation("level-ordering",
                                         f"level {i} rule references {label!r} at level "
                                         f"{target.level}, which is not lower", rule.name))

    for rule in model.levels[0]:
        if not isinstance(rule.rhs, ObjectSet):
            continue
        for string in rule.rhs.strings:
            for token in string:
                if token in RESERVED:
                    out.append(Violation("reserved-token",
                                         f"string {' '.join(string)!r} contains reserved "
                                         f"token {token!r}", rule.name))
                elif not is_token(token):
                    out.append(Violation("bad-token", f"invalid token {token!r}", rule.name))
                elif token not in model.terminals:
                    out.append(Violation("terminal-missing",
                                         f"token {token!r} is not declared a terminal", rule.name))
    return out


def canonicalize_model(model: OFSModel) -> OFSModel:
    """Canonicalize every expression and sort rules by label within levels."""
    levels = []
    for i, rules in enumerate(model.levels):
        fixed = []
        for rule in sorted(rules, key=lambda r: r.name.label):
            rhs = canonicalize(rule.rhs) if isinstance(rule.rhs, Expr) else rule.rhs
            fixed.append(Rule(rule.name, rhs))
        levels.append(tuple(fixed))
    return OFSModel(model.name, model.terminals, tuple(levels))
