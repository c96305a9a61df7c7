"""Prototype instantiation and pruning.

The golden sets below were derived by hand-segmenting the 43 demo
monosyllables into onset, peak and coda and transcribing the published
listings; they are frozen here so instantiation is checked element for
element, not just by size.
"""

import random
from itertools import product

import pytest
from fractions import Fraction

import ofskit as K
from util import oracle_captures, oracle_member

GOLDEN_ONSET = {
    "", "b", "s", "k", "s t", "f", "d", "tS", "k l", "d j", "d r", "d w",
    "f r", "g", "g r", "k w", "s p l", "s p r", "s t r",
}
GOLDEN_PEAK = {
    "ae", "A:", "E", "O:", "aI", "eI", "i:", "E@", "2", "@U", "6", "I", "u:",
}
GOLDEN_CODA = {
    "", "b", "s", "k", "s t", "f", "d", "z", "S", "s k", "s p", "k s",
    "n t s", "*", "n tS", "n tS t", "v", "l", "v z", "f t s", "l d", "t",
    "N", "p s", "n",
}


def as_strings(object_set: K.ObjectSet) -> set[str]:
    return {" ".join(s) for s in object_set.strings}


class TestGoldenInstantiation:
    def test_sets_match_exactly(self, syllable_model):
        assert as_strings(syllable_model.rule("Onset").rhs) == GOLDEN_ONSET
        assert as_strings(syllable_model.rule("Peak").rhs) == GOLDEN_PEAK
        assert as_strings(syllable_model.rule("Coda").rhs) == GOLDEN_CODA

    def test_sizes(self, syllable_model):
        assert len(syllable_model.rule("Onset").rhs) == 19
        assert len(syllable_model.rule("Peak").rhs) == 13
        assert len(syllable_model.rule("Coda").rhs) == 25

    def test_terminals_are_corpus_tokens(self, syllable_model, mono_words):
        observed = {t for w in mono_words for t in w.phonemes()}
        assert syllable_model.terminals == frozenset(observed)


class TestWordPrototype:
    def test_single_stressed_monosyllable(self, word_proto, alphabet):
        words, rejects = K.ingest(["'ae"], alphabet)
        assert rejects == []
        model = K.instantiate(word_proto, words)
        assert isinstance(model, K.OFSModel)
        labels = [r.name.label for r in model.level0_rules]
        assert labels == ["S_mon_st"]
        assert as_strings(model.rule("S_mon_st").rhs) == {"ae"}
        assert K.serialize_model(model).splitlines()[3] == "  Word => S_mon_st"

    def test_matches_exhaustive_former_evaluation(self, word_proto, alphabet):
        corpus = ["'baek", "si:", "'baek-si:", "baek-'si:", "'baek-si:-baek",
                  "baek-'si:-baek", "baek-si:-'baek", "'baek-si:-baek-si:",
                  "baek-si:-baek-'si:", "baek-'si:-baek-si:"]
        words, rejects = K.ingest(corpus, alphabet, require_stress=False)
        assert rejects == []
        model = K.instantiate(word_proto, words)
        table = alphabet.class_table
        for rule in word_proto.level0_rules:
            expected = set()
            for word in words:
                expected |= oracle_captures(rule.rhs, word.datum(), table)
            got = model.rule(rule.name.label).rhs.strings if any(
                r.name.label == rule.name.label for r in model.level0_rules) else frozenset()
            if expected:
                assert got == frozenset(expected), rule.name.label
            else:
                assert not any(r.name.label == rule.name.label
                               for r in model.level0_rules)

    def test_coverage_of_every_ingested_word(self, word_proto, alphabet):
        corpus = ["'baek", "si:", "baek-'si:", "'si:-baek", "baek-si:-'baek",
                  "'baek-baek-si:", "baek-'baek-si:-si:", "si:-baek-'si:-baek-si:"]
        words, rejects = K.ingest(corpus, alphabet, require_stress=False)
        assert rejects == []
        model = K.instantiate(word_proto, words)
        auto = K.compile_model(model)
        for word in words:
            assert auto.accepts(word.phonemes()), word

    def test_empty_corpus_raises(self, word_proto):
        with pytest.raises(K.EmptyCorpus):
            K.instantiate(word_proto, [])

    def test_monotone_in_data(self, word_proto, alphabet):
        lines = ["'baek", "baek-'si:", "'si:-baek-baek", "si:",
                 "baek-'si:-si:", "'si:", "si:-si:-'baek"]
        words, _ = K.ingest(lines, alphabet, require_stress=False)
        small = K.instantiate(word_proto, words[:3])
        large = K.instantiate(word_proto, words)
        for rule in small.level0_rules:
            assert rule.rhs.strings <= large.rule(rule.name.label).rhs.strings
        # Language inclusion, checked by exhaustive enumeration.
        big_auto = K.compile_model(large)
        for word, _ in K.enumerate_derivations(small, 3):
            assert big_auto.accepts(word)


def dutch_style_model():
    """A model where one alternation branch refers to an empty class."""
    return K.OFSModel(
        "Word", frozenset("ax"),
        (
            (
                K.Rule(K.ObjectName(0, "S_mon_st"), K.ObjectSet.of([("a",)])),
                K.Rule(K.ObjectName(0, "S_mon_pl"), K.ObjectSet(frozenset())),
                K.Rule(K.ObjectName(0, "S_ini_st"), K.ObjectSet.of([("x",)])),
                K.Rule(K.ObjectName(0, "S_fin_po"), K.ObjectSet.of([("a", "x")])),
            ),
            (K.Rule(K.ObjectName(1, "Word"), K.alt(
                K.ref("S_mon_st"),
                K.ref("S_mon_pl"),
                K.cat(K.ref("S_ini_st"), K.ref("S_fin_po")),
            )),),
        ),
    )


class TestPrune:
    def test_branch_with_empty_class_is_dropped(self):
        pruned = K.prune(dutch_style_model())
        assert isinstance(pruned, K.OFSModel)
        labels = [r.name.label for r in pruned.level0_rules]
        assert "S_mon_pl" not in labels
        rhs = pruned.top_rule.rhs
        assert rhs == K.canonicalize(K.alt(
            K.ref("S_mon_st"), K.cat(K.ref("S_ini_st"), K.ref("S_fin_po"))))

    def test_model_without_empty_sets_is_unchanged(self, syllable_model):
        assert K.prune(syllable_model) == syllable_model

    def test_total_death_gives_the_empty_model(self):
        model = K.OFSModel(
            "Word", frozenset("a"),
            (
                (K.Rule(K.ObjectName(0, "A"), K.ObjectSet(frozenset())),),
                (K.Rule(K.ObjectName(1, "Word"), K.plus(K.ref("A"))),),
            ),
        )
        pruned = K.prune(model)
        assert isinstance(pruned, K.EmptyModel)
        assert pruned.name == "Word"

    def test_dead_star_body_becomes_epsilon(self):
        model = K.OFSModel(
            "W", frozenset("ab"),
            (
                (
                    K.Rule(K.ObjectName(0, "A"), K.ObjectSet.of([("a",)])),
                    K.Rule(K.ObjectName(0, "B"), K.ObjectSet(frozenset())),
                ),
                (K.Rule(K.ObjectName(1, "W"),
                        K.cat(K.ref("A"), K.star(K.ref("B")), K.ref("A"))),),
            ),
        )
        pruned = K.prune(model)
        assert pruned.top_rule.rhs == K.Concat((K.ref("A"), K.ref("A")))

    def test_idempotent(self):
        model = dutch_style_model()
        once = K.prune(model)
        assert K.prune(once) == once

    def test_language_is_preserved(self):
        model = dutch_style_model()
        pruned = K.prune(model)
        auto = K.compile_model(pruned)
        for n in range(0, 5):
            for word in product("ax", repeat=n):
                assert oracle_member(model, word) == auto.accepts(word)
