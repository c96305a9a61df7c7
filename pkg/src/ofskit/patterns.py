"""Set-former patterns: anchored context patterns with one capture.

A former describes a set of substrings relative to whole data strings.
Each alternative is a sequence of elements, one of which is the capture;
the others constrain the context.  Evaluating a former against a datum
collects the capture substring of every decomposition, so overlapping
matches all contribute.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import PatternSyntaxError, UnknownClass, UnknownToken
from .model import SEPARATOR, STRESS, is_label, is_token

ONE = "1"
MANY = "*"
SOME = "+"

ANY = "ANY"
NOSEP = "NOSEP"
NOSEPSTRESS = "NOSEPSTRESS"


@dataclass(frozen=True)
class TokenClassTable:
    """Named token classes, including the always-present derived classes.

    ``ANY`` holds every token including the reserved separator and stress
    marker, ``NOSEP`` everything but the separator, and ``NOSEPSTRESS``
    everything but both markers.
    """

    classes: tuple[tuple[str, frozenset[str]], ...]

    @classmethod
    def build(cls, tokens: Iterable[str], user_classes: Mapping[str, Iterable[str]] = ()) -> "TokenClassTable":
        toks = frozenset(tokens)
        full = toks | {SEPARATOR, STRESS}
        entries: dict[str, frozenset[str]] = {}
        for name, members in dict(user_classes).items():
            entries[name] = frozenset(members)
        entries[ANY] = full
        entries[NOSEP] = full - {SEPARATOR}
        entries[NOSEPSTRESS] = full - {SEPARATOR, STRESS}
        return cls(tuple(sorted(entries.items())))

    @cached_property
    def _map(self) -> dict[str, frozenset[str]]:
        return dict(self.classes)

    def lookup(self, name: str) -> frozenset[str]:
        try:
            return self._map[name]
        except KeyError:
            raise UnknownClass(f"token class {name!r} is not defined") from None

    @property
    def all_tokens(self) -> frozenset[str]:
        return self._map[ANY]


@dataclass(frozen=True)
class Lit:
    token: str


@dataclass(frozen=True)
class Var:
    cls: str
    mult: str = ONE
    capture: bool = False
    var_name: str | None = None


PatternElement = Lit | Var


@dataclass(frozen=True)
class ContextPattern:
    """An anchored element sequence with exactly one capture element."""

    elements: tuple[PatternElement, ...]

    @cached_property
    def capture_index(self) -> int:
        idx = [i for i, e in enumerate(self.elements)
               if isinstance(e, Var) and e.capture]
        if len(idx) != 1:
            raise ValueError(f"pattern must have exactly one capture, found {len(idx)}")
        return idx[0]


@dataclass(frozen=True)
class SetFormer:
    alternatives: tuple[ContextPattern, ...]


def _element_spans(i: int, elem: PatternElement, datum, table: TokenClassTable) -> list[int]:
    """End positions reachable by matching one element starting at i."""
    n = len(datum)
    if isinstance(elem, Lit):
        return [i + 1] if i < n and datum[i] == elem.token else []
    members = table.lookup(elem.cls)
    if elem.mult == ONE:
        return [i + 1] if i < n and datum[i] in members else []
    ends = []
    if elem.mult == MANY:
        ends.append(i)
    j = i
    while j < n and datum[j] in members:
        j += 1
        ends.append(j)
    return ends


def match_captures(former: SetFormer, datum, table: TokenClassTable) -> frozenset[tuple[str, ...]]:
    """The set of capture substrings over all decompositions of the datum.

    Matching is anchored: every alternative must account for the entire
    datum.  The result is deduplicated; nothing matching yields the empty
    set.
    """
    datum = tuple(datum)
    known = table.all_tokens
    for t in datum:
        if t not in known:
            raise UnknownToken(f"datum token {t!r} is not in the alphabet")

    captures: set[tuple[str, ...]] = set()
    n = len(datum)
    for pattern in former.alternatives:
        elems = pattern.elements
        c = pattern.capture_index
        # Positions reachable after matching the elements before the capture.
        forward: set[int] = {0}
        for elem in elems[:c]:
            forward = {j for i in forward for j in _element_spans(i, elem, datum, table)}
        # Positions from which the elements after the capture reach the end.
        backward: set[int] = {n}
        for elem in reversed(elems[c + 1:]):
            backward = {i for i in range(n + 1)
                        if any(j in backward for j in _element_spans(i, elem, datum, table))}
        for i in forward:
            for j in _element_spans(i, elems[c], datum, table):
                if j in backward:
                    captures.add(datum[i:j])
    return frozenset(captures)


# --------------------------------------------------------------------------
# Concrete syntax.
#
#   former  := alt ('|' alt)*
#   alt     := '/' elem+ '/'
#   elem    := '"' token '"'                 literal
#            | '[' CLASS mult? ']'           context variable
#            | '(' name ':' CLASS mult? ')'  capture variable
#   mult    := '*' | '+'

class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> PatternSyntaxError:
        line = self.text.count("\n", 0, self.pos) + 1
        col = self.pos - (self.text.rfind("\n", 0, self.pos) + 1) + 1
        return PatternSyntaxError(message, line=line, col=col)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a name")
        return self.text[start:self.pos]

    def quoted(self) -> str:
        self.take('"')
        end = self.text.find('"', self.pos)
        if end < 0:
            raise self.error("unterminated literal")
        token = self.text[self.pos:end]
        self.pos = end + 1
        if not is_token(token) and token not in (SEPARATOR, STRESS):
            raise self.error(f"invalid literal token {token!r}")
        return token

    def mult(self) -> str:
        ch = self.peek()
        if ch == "*":
            self.pos += 1
            return MANY
        if ch == "+":
            self.pos += 1
            return SOME
        return ONE


def parse_former(text: str) -> SetFormer:
    """Parse the pattern syntax into a former; raises PatternSyntaxError."""
    sc = _Scanner(text)
    alternatives = []
    while True:
        sc.take("/")
        elems: list[PatternElement] = []
        captures = 0
        while sc.peek() != "/":
            ch = sc.peek()
            if ch == "":
                raise sc.error("unterminated alternative")
            if ch == '"':
                elems.append(Lit(sc.quoted()))
            elif ch == "[":
                sc.take("[")
                cls = sc.name()
                sc.take("]")
                elems.append(Var(cls, sc.mult()))
            elif ch == "(":
                sc.take("(")
                var = sc.name()
                sc.take(":")
                cls = sc.name()
                mult = sc.mult()
                sc.take(")")
                elems.append(Var(cls, mult, capture=True, var_name=var))
                captures += 1
            else:
                raise sc.error(f"unexpected character {ch!r}")
        sc.take("/")
        if not elems:
            raise sc.error("empty alternative")
        if captures != 1:
            raise sc.error(f"alternative must have exactly one capture, found {captures}")
        alternatives.append(ContextPattern(tuple(elems)))
        if sc.peek() != "|":
            break
        sc.take("|")
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise sc.error("trailing input after pattern")
    return SetFormer(tuple(alternatives))


def serialize_former(former: SetFormer) -> str:
    parts = []
    for pattern in former.alternatives:
        bits = []
        for elem in pattern.elements:
            if isinstance(elem, Lit):
                bits.append(f'"{elem.token}"')
            elif elem.capture:
                suffix = "" if elem.mult == ONE else elem.mult
                bits.append(f"({elem.var_name or 'x'}: {elem.cls}{suffix})")
            else:
                suffix = "" if elem.mult == ONE else elem.mult
                bits.append(f"[{elem.cls}]{suffix}")
        parts.append("/ " + " ".join(bits) + " /")
    return " | ".join(parts)
