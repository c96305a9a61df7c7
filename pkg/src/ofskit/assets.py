"""Access to the data files shipped with the package."""

from __future__ import annotations

from importlib import resources


def asset_text(name: str) -> str:
    return resources.files("ofskit").joinpath("data", name).read_text(encoding="utf-8")


def word_prototype_text() -> str:
    """The twelve-class word-level prototype."""
    return asset_text("word12.ofsp")


def syllable_prototype_text() -> str:
    """The onset / peak / coda syllable prototype."""
    return asset_text("syllable.ofsp")


def demo_alphabet_text() -> str:
    """A small English phoneme inventory covering the demo corpus."""
    return asset_text("english.alphabet")


def demo_corpus_text() -> str:
    """43 transcribed English monosyllables."""
    return asset_text("english_monosyllables.txt")
