"""The model text formats.

A fully specified model (``.ofs``)::

    ofs-model <name> levels=<count>
    terminals: tok1 tok2 ...
    level <n>:
      <Name> => <regex>       # juxtaposition concatenates, | alternates,
    ...                       # postfix * and + repeat, () is epsilon
    level 0:
      <Name> = { "s1 s2", "" }   # space-separated tokens inside quotes

A prototype (``.ofsp``) is identical except that level-0 rules carry
set-former patterns: ``<Name> = / ... / | / ... /``.

Serialization is canonical (expressions canonicalized, rules and strings
sorted), so parse and serialize round-trip byte for byte.
"""

from __future__ import annotations

from pathlib import Path

from .errors import FormatError
from .instantiate import PrototypeModel
from .model import (
    Alt,
    Concat,
    EPSILON,
    Epsilon,
    Expr,
    ObjectName,
    ObjectSet,
    OFSModel,
    Plus,
    Ref,
    Rule,
    Star,
    canonicalize_model,
    is_label,
    is_token,
)
from .patterns import SetFormer, parse_former, serialize_former

HEADER = "ofs-model"


# --------------------------------------------------------------------------
# Rendering.

def render_expr(expr: Expr) -> str:
    if isinstance(expr, Epsilon):
        return "()"
    if isinstance(expr, Ref):
        return expr.label
    if isinstance(expr, (Star, Plus)):
        op = "*" if isinstance(expr, Star) else "+"
        inner = expr.inner
        body = render_expr(inner)
        if isinstance(inner, (Concat, Alt, Star, Plus)):
            body = f"({body})"
        return body + op
    if isinstance(expr, Concat):
        bits = []
        for part in expr.parts:
            body = render_expr(part)
            if isinstance(part, Alt):
                body = f"({body})"
            bits.append(body)
        return " ".join(bits)
    if isinstance(expr, Alt):
        return " | ".join(render_expr(p) for p in expr.parts)
    raise TypeError(f"not an expression: {expr!r}")


def _render_strings(strings: ObjectSet) -> str:
    items = ", ".join(f'"{" ".join(s)}"' for s in strings.sorted_strings())
    return "{ " + items + " }" if items else "{ }"


def serialize_model(model: OFSModel) -> str:
    """Canonical text for a model; stable under parse/serialize cycles."""
    model = canonicalize_model(model)
    lines = [f"{HEADER} {model.name} levels={model.level_count}"]
    terms = " ".join(sorted(model.terminals))
    lines.append(f"terminals: {terms}" if terms else "terminals:")
    for level in reversed(range(model.level_count)):
        lines.append(f"level {level}:")
        for rule in model.levels[level]:
            if isinstance(rule.rhs, ObjectSet):
                lines.append(f"  {rule.name.label} = {_render_strings(rule.rhs)}")
            else:
                lines.append(f"  {rule.name.label} => {render_expr(rule.rhs)}")
    return "\n".join(lines) + "\n"


def serialize_prototype(proto: PrototypeModel) -> str:
    lines = [f"{HEADER} {proto.name} levels={proto.level_count}", "terminals:"]
    for level in reversed(range(proto.level_count)):
        lines.append(f"level {level}:")
        for rule in proto.levels[level]:
            if isinstance(rule.rhs, SetFormer):
                lines.append(f"  {rule.name.label} = {serialize_former(rule.rhs)}")
            else:
                lines.append(f"  {rule.name.label} => {render_expr(rule.rhs)}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Parsing.

def _strip_comment(line: str) -> str:
    out = []
    in_quote = False
    for ch in line:
        if ch == '"':
            in_quote = not in_quote
        if ch == "#" and not in_quote:
            break
        out.append(ch)
    return "".join(out)


class _ExprScanner:
    def __init__(self, text: str, *, path, lineno):
        self.text = text
        self.pos = 0
        self.path = path
        self.lineno = lineno

    def error(self, message: str) -> FormatError:
        return FormatError(message, path=self.path, line=self.lineno)

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def name(self) -> str:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]


def parse_expr(text: str, *, path=None, lineno=None) -> Expr:
    sc = _ExprScanner(text, path=path, lineno=lineno)

    def parse_alt() -> Expr:
        parts = [parse_concat()]
        while sc.peek() == "|":
            sc.pos += 1
            parts.append(parse_concat())
        return parts[0] if len(parts) == 1 else Alt(tuple(parts))

    def parse_concat() -> Expr:
        parts = []
        while True:
            ch = sc.peek()
            if ch == "(" or ch.isalnum() or ch == "_":
                parts.append(parse_postfix())
            else:
                break
        if not parts:
            raise sc.error("expected an expression")
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def parse_postfix() -> Expr:
        expr = parse_atom()
        while True:
            ch = sc.peek()
            if ch == "*":
                sc.pos += 1
                expr = Star(expr)
            elif ch == "+":
                sc.pos += 1
                expr = Plus(expr)
            else:
                return expr

    def parse_atom() -> Expr:
        ch = sc.peek()
        if ch == "(":
            sc.pos += 1
            if sc.peek() == ")":
                sc.pos += 1
                return EPSILON
            inner = parse_alt()
            if sc.peek() != ")":
                raise sc.error("expected ')'")
            sc.pos += 1
            return inner
        label = sc.name()
        if not label:
            raise sc.error(f"unexpected character {ch!r} in expression")
        if not is_label(label):
            raise sc.error(f"invalid object name {label!r}")
        return Ref(label)

    expr = parse_alt()
    if sc.peek():
        raise sc.error(f"trailing input {sc.text[sc.pos:]!r} in expression")
    return expr


def _parse_strings(text: str, *, path, lineno) -> ObjectSet:
    pos = 0
    n = len(text)

    def err(message):
        return FormatError(message, path=path, line=lineno)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    skip_ws()
    if pos >= n or text[pos] != "{":
        raise err("expected '{'")
    pos += 1
    strings = set()
    expecting = True
    while True:
        skip_ws()
        if pos >= n:
            raise err("unterminated string set")
        if text[pos] == "}":
            pos += 1
            break
        if text[pos] == ",":
            pos += 1
            expecting = True
            continue
        if text[pos] != '"':
            raise err(f"unexpected character {text[pos]!r} in string set")
        if not expecting:
            raise err("missing ',' between strings")
        end = text.find('"', pos + 1)
        if end < 0:
            raise err("unterminated string")
        content = text[pos + 1:end]
        pos = end + 1
        tokens = tuple(content.split())
        for tok in tokens:
            if not is_token(tok):
                raise err(f"invalid token {tok!r}")
        strings.add(tokens)
        expecting = False
    skip_ws()
    if pos != n:
        raise err(f"trailing input {text[pos:]!r} after string set")
    return ObjectSet(frozenset(strings))


def _parse_common(text: str, *, path, prototype: bool):
    lines = text.splitlines()
    header = None
    terminals: list[str] = []
    sections: list[tuple[int, list[tuple[int, str]]]] = []
    current: list[tuple[int, str]] | None = None
    saw_terminals = False

    for lineno, raw in enumerate(lines, start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if header is None:
            bits = line.split()
            if len(bits) != 3 or bits[0] != HEADER or not bits[2].startswith("levels="):
                raise FormatError(f"expected '{HEADER} <name> levels=<count>'", path=path, line=lineno)
            try:
                count = int(bits[2][len("levels="):])
            except ValueError:
                raise FormatError("level count is not a number", path=path, line=lineno) from None
            if count < 1:
                raise FormatError("a model needs at least one level", path=path, line=lineno)
            header = (bits[1], count)
            continue
        if line.startswith("terminals:"):
            if saw_terminals:
                raise FormatError("duplicate terminals line", path=path, line=lineno)
            saw_terminals = True
            terminals = line[len("terminals:"):].split()
            for tok in terminals:
                if not is_token(tok):
                    raise FormatError(f"invalid terminal {tok!r}", path=path, line=lineno)
            continue
        if line.startswith("level ") and line.endswith(":"):
            try:
                idx = int(line[len("level "):-1])
            except ValueError:
                raise FormatError("bad level header", path=path, line=lineno) from None
            current = []
            sections.append((idx, current))
            continue
        if current is None:
            raise FormatError("rule outside of a level section", path=path, line=lineno)
        current.append((lineno, line))

    if header is None:
        raise FormatError("empty model file", path=path)
    name, count = header
    by_index = {}
    for idx, rules in sections:
        if idx in by_index:
            raise FormatError(f"duplicate section for level {idx}", path=path)
        by_index[idx] = rules
    if set(by_index) != set(range(count)):
        raise FormatError(
            f"expected sections for levels 0..{count - 1}, found {sorted(by_index)}", path=path)

    levels: list[tuple[Rule, ...]] = []
    for idx in range(count):
        rules = []
        for lineno, line in by_index[idx]:
            if idx > 0:
                label, sep, rhs_text = line.partition("=>")
                if not sep:
                    raise FormatError(f"level {idx} rules use '=>'", path=path, line=lineno)
            else:
                label, sep, rhs_text = line.partition("=")
                if not sep:
                    raise FormatError("level 0 rules use '='", path=path, line=lineno)
                if rhs_text.startswith(">"):
                    raise FormatError("level 0 rules use '=', not '=>'", path=path, line=lineno)
            label = label.strip()
            rhs_text = rhs_text.strip()
            if not is_label(label):
                raise FormatError(f"invalid rule name {label!r}", path=path, line=lineno)
            name_obj = ObjectName(idx, label)
            if idx > 0:
                rules.append(Rule(name_obj, parse_expr(rhs_text, path=path, lineno=lineno)))
            elif prototype:
                rules.append(Rule(name_obj, parse_former(rhs_text)))
            else:
                rules.append(Rule(name_obj, _parse_strings(rhs_text, path=path, lineno=lineno)))
        levels.append(tuple(rules))
    return name, frozenset(terminals), tuple(levels)


def parse_model_text(text: str, *, path=None) -> OFSModel:
    name, terminals, levels = _parse_common(text, path=path, prototype=False)
    return OFSModel(name, terminals, levels)


def parse_prototype_text(text: str, *, path=None) -> PrototypeModel:
    name, _terminals, levels = _parse_common(text, path=path, prototype=True)
    return PrototypeModel(name, levels)


def load_model(path) -> OFSModel:
    return parse_model_text(Path(path).read_text(encoding="utf-8"), path=path)

def save_model(model: OFSModel, path) -> None:
    Path(path).write_text(serialize_model(model), encoding="utf-8")


def load_prototype(path, *, classes=None) -> PrototypeModel:
    proto = parse_prototype_text(Path(path).read_text(encoding="utf-8"), path=path)
    return proto.with_classes(classes) if classes is not None else proto


def save_prototype(proto: PrototypeModel, path) -> None:
    Path(path).write_text(serialize_prototype(proto), encoding="utf-8")
