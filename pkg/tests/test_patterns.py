"""Set formers: syntax, matching, and equivalence with exhaustive search."""

import random

import pytest
from hypothesis import given, settings, strategies as st

import ofskit as K
from util import oracle_captures

TABLE = K.TokenClassTable.build(
    ["p", "t", "k", "s", "a", "e", "i"],
    {"CONSONANTS": ["p", "t", "k", "s"], "VOWELS": ["a", "e", "i"]},
)

ONSET = K.parse_former("/ (x: CONSONANTS*) [VOWELS] [ANY]* /")


class TestMatchCaptures:
    def test_onset_of_cluster(self):
        got = K.match_captures(ONSET, ("s", "t", "k", "a", "p", "s"), TABLE)
        assert got == frozenset({("s", "t", "k")})

    def test_empty_capture_from_bare_vowel(self):
        assert K.match_captures(ONSET, ("a",), TABLE) == frozenset({()})

    def test_no_match_gives_empty_set(self):
        assert K.match_captures(ONSET, ("s", "t"), TABLE) == frozenset()

    def test_medial_between_posttonic_and_final(self):
        former = K.parse_former(
            "/ [ANY]* \"'\" [ANY]* \"-\" [ANY]* \"-\" (x: NOSEP*) \"-\" [ANY]* /")
        datum = ("'", "a", "-", "t", "-", "k", "-", "e")
        assert K.match_captures(former, datum, TABLE) == frozenset({("k",)})
        five = ("'", "a", "-", "t", "-", "k", "-", "e", "-", "i")
        assert K.match_captures(former, five, TABLE) == \
            frozenset({("k",), ("e",)})

    def test_overlapping_decompositions_all_contribute(self):
        former = K.parse_former("/ [ANY]* (x: VOWELS) [ANY]* /")
        got = K.match_captures(former, ("a", "t", "e"), TABLE)
        assert got == frozenset({("a",), ("e",)})

    def test_unknown_class_raises(self):
        former = K.parse_former("/ (x: NOPE*) /")
        with pytest.raises(K.UnknownClass):
            K.match_captures(former, ("a",), TABLE)

    def test_unknown_datum_token_raises(self):
        with pytest.raises(K.UnknownToken):
            K.match_captures(ONSET, ("z",), TABLE)


class TestSyntax:
    def test_round_trip(self):
        text = "/ \"'\" (x: NOSEP*) /"
        former = K.parse_former(text)
        assert K.serialize_former(former) == text
        assert K.parse_former(K.serialize_former(former)) == former

    def test_alternatives_round_trip(self):
        former = K.parse_former("/ (x: VOWELS+) / | / [ANY] (y: CONSONANTS) [ANY]* /")
        assert len(former.alternatives) == 2
        assert K.parse_former(K.serialize_former(former)) == former

    def test_two_captures_is_a_syntax_error(self):
        with pytest.raises(K.PatternSyntaxError, match="exactly one capture"):
            K.parse_former("/ (x: VOWELS) (y: VOWELS) /")

    def test_zero_captures_is_a_syntax_error(self):
        with pytest.raises(K.PatternSyntaxError, match="exactly one capture"):
            K.parse_former("/ [VOWELS] /")

    def test_error_carries_position(self):
        with pytest.raises(K.PatternSyntaxError) as err:
            K.parse_former("/ [VOWELS /")
        assert err.value.col > 1

    def test_garbage_rejected(self):
        with pytest.raises(K.PatternSyntaxError):
            K.parse_former("/ what? /")


def random_former(rng: random.Random) -> K.SetFormer:
    alternatives = []
    for _ in range(rng.randint(1, 2)):
        n = rng.randint(1, 5)
        capture_at = rng.randrange(n)
        elems = []
        for i in range(n):
            if i != capture_at and rng.random() < 0.3:
                elems.append(K.Lit(rng.choice(["p", "a", "'", "-"])))
                continue
            cls = rng.choice(["CONSONANTS", "VOWELS", "ANY", "NOSEP"])
            mult = rng.choice(["1", "*", "+"])
            elems.append(K.Var(cls, mult, capture=(i == capture_at),
                               var_name="x" if i == capture_at else None))
        alternatives.append(K.ContextPattern(tuple(elems)))
    return K.SetFormer(tuple(alternatives))


class TestProperties:
    def test_matches_exhaustive_assignment(self):
        rng = random.Random(5)
        tokens = ["p", "t", "a", "e", "'", "-"]
        for _ in range(300):
            former = random_former(rng)
            datum = tuple(rng.choice(tokens) for _ in range(rng.randint(0, 8)))
            assert K.match_captures(former, datum, TABLE) == \
                oracle_captures(former, datum, TABLE), (former, datum)

    def test_alternative_order_is_irrelevant(self):
        rng = random.Random(6)
        for _ in range(50):
            former = random_former(rng)
            if len(former.alternatives) < 2:
                continue
            flipped = K.SetFormer(tuple(reversed(former.alternatives)))
            datum = tuple(rng.choice(["p", "a", "-", "'"]) for _ in range(6))
            assert K.match_captures(former, datum, TABLE) == \
                K.match_captures(flipped, datum, TABLE)

    def test_plus_capture_drops_exactly_the_empty_capture(self):
        rng = random.Random(9)
        checked = 0
        for _ in range(400):
            former = random_former(rng)
            pattern = former.alternatives[0]
            c = pattern.capture_index
            elem = pattern.elements[c]
            if elem.mult != "*":
                continue
            plus_elems = list(pattern.elements)
            plus_elems[c] = K.Var(elem.cls, "+", capture=True, var_name=elem.var_name)
            plus_former = K.SetFormer((K.ContextPattern(tuple(plus_elems)),))
            star_former = K.SetFormer((pattern,))
            datum = tuple(rng.choice(["p", "t", "a", "'"]) for _ in range(rng.randint(0, 7)))
            star_caps = K.match_captures(star_former, datum, TABLE)
            plus_caps = K.match_captures(plus_former, datum, TABLE)
            assert plus_caps <= star_caps
            assert star_caps - plus_caps <= {()}
            checked += 1
        assert checked > 30
