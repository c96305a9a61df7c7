import sys
from pathlib import Path

import pytest

import ofskit as K

sys.path.insert(0, str(Path(__file__).parent))

REPO = Path(__file__).resolve().parent.parent
DATA = REPO / "data"
PROTOTYPES = REPO / "prototypes"


@pytest.fixture(scope="session")
def alphabet() -> K.AlphabetSpec:
    return K.AlphabetSpec.load(DATA / "english.alphabet")


@pytest.fixture(scope="session")
def mono_words(alphabet):
    words, rejects = K.read_corpus(DATA / "english_monosyllables.txt", alphabet,
                                   require_stress=False)
    assert rejects == []
    return words


@pytest.fixture(scope="session")
def syllable_proto(alphabet) -> K.PrototypeModel:
    return K.load_prototype(PROTOTYPES / "syllable.ofsp", classes=alphabet.class_table)


@pytest.fixture(scope="session")
def word_proto(alphabet) -> K.PrototypeModel:
    return K.load_prototype(PROTOTYPES / "word12.ofsp", classes=alphabet.class_table)


@pytest.fixture(scope="session")
def syllable_model(syllable_proto, mono_words) -> K.OFSModel:
    """The onset/peak/coda model instantiated from the demo monosyllables."""
    model = K.instantiate(syllable_proto, mono_words)
    assert isinstance(model, K.OFSModel)
    return model


@pytest.fixture(scope="session")
def merged_model(syllable_model) -> K.OFSModel:
    """The same model with onsets and codas merged (tau below 7/37)."""
    from fractions import Fraction

    model, _records = K.generalise(syllable_model, Fraction(18, 100))
    return model
