"""Alphabets, tokenization and word-list ingestion.

Corpus files carry one transcribed word per line.  Syllables are separated
by ``-`` and the stress marker ``'`` immediately precedes the first token
of the stressed syllable.  Lines starting with ``#`` are comments.

The alphabet file lists one phoneme token per line together with its
classes, e.g. ``tS: CONSONANTS``.  Since some tokens contain ``:``, the
separator is the last colon on the line.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

from .errors import FormatError, UntokenizableInput
from .model import RESERVED, SEPARATOR, STRESS, is_token
from .patterns import TokenClassTable


@dataclass(frozen=True)
class AlphabetSpec:
    """The phoneme inventory with class memberships.

    Reserved markers are always tokenizable but never belong to the
    inventory itself, and no inventory token may contain a marker
    character (greedy tokenization could otherwise swallow separators).
    """

    tokens: tuple[str, ...]
    classes: tuple[tuple[str, frozenset[str]], ...]

    @classmethod
    def build(cls, token_classes: dict[str, tuple[str, ...]]) -> "AlphabetSpec":
        for token, names in token_classes.items():
            if not is_token(token) or token in RESERVED:
                raise FormatError(f"invalid phoneme token {token!r}")
            if SEPARATOR in token or STRESS in token:
                raise FormatError(f"token {token!r} contains a reserved marker character")
            if not names:
                raise FormatError(f"token {token!r} belongs to no class")
        classes: dict[str, set[str]] = {}
        for token, names in token_classes.items():
            for name in names:
                classes.setdefault(name, set()).add(token)
        return cls(
            tuple(sorted(token_classes)),
            tuple(sorted((n, frozenset(m)) for n, m in classes.items())),
        )

    @classmethod
    def from_text(cls, text: str, *, path=None) -> "AlphabetSpec":
        table: dict[str, tuple[str, ...]] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ":" not in line:
                raise FormatError("expected 'token: class, ...'", path=path, line=lineno)
            token, _, rest = line.rpartition(":")
            token = token.strip()
            names = tuple(n.strip() for n in rest.split(",") if n.strip())
            if token in table:
                raise FormatError(f"duplicate token {token!r}", path=path, line=lineno)
            table[token] = names
        if not table:
            raise FormatError("alphabet file defines no tokens", path=path)
        return cls.build(table)

    @classmethod
    def load(cls, path) -> "AlphabetSpec":
        return cls.from_text(Path(path).read_text(encoding="utf-8"), path=path)

    @cached_property
    def token_set(self) -> frozenset[str]:
        return frozenset(self.tokens) | RESERVED

    @cached_property
    def _by_length(self) -> list[int]:
        return sorted({len(t) for t in self.token_set}, reverse=True)

    @cached_property
    def class_table(self) -> TokenClassTable:
        return TokenClassTable.build(self.tokens, dict(self.classes))


def tokenize(line: str, alphabet: AlphabetSpec, *, spaced: bool = False) -> list[str]:
    """Segment a transcription into tokens.

    Default mode is greedy longest match against the inventory plus the
    reserved markers.  In spaced mode the line is split on whitespace and
    every unit must be a known token.
    """
    line = line.strip()
    if not line:
        return []
    if spaced:
        out = []
        pos = 0
        for unit in line.split():
            pos = line.index(unit, pos)
            if unit not in alphabet.token_set:
                raise UntokenizableInput(
                    f"unknown token {unit!r}",
                    offset=len(line[:pos].encode("utf-8")),
                )
            pos += len(unit)
            out.append(unit)
        return out
    tokens = []
    i = 0
    known = alphabet.token_set
    while i < len(line):
        for length in alphabet._by_length:
            piece = line[i:i + length]
            if piece in known:
                tokens.append(piece)
                i += length
                break
        else:
            raise UntokenizableInput(
                f"cannot match a token at {line[i:i + 8]!r}",
                offset=len(line[:i].encode("utf-8")),
            )
    return tokens


@dataclass(frozen=True)
class WordForm:
    """A tokenized word: its syllables plus the primary-stress position."""

    syllables: tuple[tuple[str, ...], ...]
    stress_index: int | None = None

    def __post_init__(self):
        if not self.syllables:
            raise ValueError("a word needs at least one syllable")
        if self.stress_index is not None and not (0 <= self.stress_index < len(self.syllables)):
            raise ValueError("stress index out of range")

    def phonemes(self) -> tuple[str, ...]:
        """All tokens with markers stripped."""
        return tuple(t for syl in self.syllables for t in syl)

    def datum(self) -> tuple[str, ...]:
        """The marked, separator-joined token sequence used for matching."""
        out: list[str] = []
        for i, syl in enumerate(self.syllables):
            if i > 0:
                out.append(SEPARATOR)
            if i == self.stress_index:
                out.append(STRESS)
            out.extend(syl)
        return tuple(out)

    def to_text(self, *, spaced: bool = True) -> str:
        joiner = " " if spaced else ""
        return joiner.join(self.datum())


@dataclass(frozen=True)
class Reject:
    lineno: int
    reason: str
    text: str


def _split_word(tokens: list[str], require_stress: bool) -> tuple[WordForm | None, str | None]:
    if not tokens:
        return None, "empty"
    marker_count = tokens.count(STRESS)
    if marker_count > 1:
        return None, "multiple-stress"
    if marker_count == 0 and require_stress:
        return None, "no-stress"
    syllables: list[tuple[str, ...]] = []
    stress_index = None
    current: list[str] = []
    stressed_here = False
    expecting_start = True
    for tok in tokens + [SEPARATOR]:
        if tok == SEPARATOR:
            if not current:
                return None, "empty-syllable"
            if stressed_here:
                stress_index = len(syllables)
            syllables.append(tuple(current))
            current = []
            stressed_here = False
            expecting_start = True
        elif tok == STRESS:
            if not expecting_start:
                return None, "misplaced-stress"
            stressed_here = True
            expecting_start = False
        else:
            current.append(tok)
            expecting_start = False
    return WordForm(tuple(syllables), stress_index), None


def ingest(lines: Iterable[str], alphabet: AlphabetSpec, *,
           require_stress: bool = True,
           spaced: bool = False) -> tuple[list[WordForm], list[Reject]]:
    """Tokenize and filter a word list.

    Every input line is either accepted as a WordForm or logged as a
    reject with a reason; blank lines and comments count as rejects, so
    accepted plus rejected always equals the number of lines.
    """
    words: list[WordForm] = []
    rejects: list[Reject] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        stripped = line.strip()
        if not stripped:
            rejects.append(Reject(lineno, "empty", line))
            continue
        if stripped.startswith("#"):
            rejects.append(Reject(lineno, "comment", line))
            continue
        try:
            tokens = tokenize(stripped, alphabet, spaced=spaced)
        except UntokenizableInput as exc:
            rejects.append(Reject(lineno, f"untokenizable: {exc}", line))
            continue
        word, reason = _split_word(tokens, require_stress)
        if word is None:
            rejects.append(Reject(lineno, reason, line))
        else:
            words.append(word)
    return words, rejects


def rejects_tsv(rejects: list[Reject]) -> str:
    lines = ["line\treason"]
    lines.extend(f"{r.lineno}\t{r.reason}" for r in rejects)
    return "\n".join(lines) + "\n"


def read_corpus(path, alphabet: AlphabetSpec, **kwargs) -> tuple[list[WordForm], list[Reject]]:
    with open(path, encoding="utf-8") as handle:
        return ingest(handle, alphabet, **kwargs)
