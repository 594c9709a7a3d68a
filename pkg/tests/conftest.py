from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wospell.lattice import invert_ruleset
from wospell.rules import builtin_ruleset


@pytest.fixture(scope="session")
def beqi():
    return builtin_ruleset()


@pytest.fixture(scope="session")
def inverse(beqi):
    return invert_ruleset(beqi)


# The published conversion pairs: official form on the left, the informal
# rendering the rule engine must reproduce byte for byte on the right.
GOLDEN_PAIRS = [
    ("Jàppal bal bi", "Diappal bal bi"),
    ("Nàngul kula raw, kula ëppalé", "Nangoul koula raw, koula euppale"),
    ("Kula gën a taaru ak kula mag", "Koula gueuna taarou ak koula mag"),
    ("Yii yëpp dula wàññi dara", "Yii yeupp doula wagni dara"),
    ("Wànté bul nangu mukk kula gën", "Wante boul nangou moukk koula gueun"),
    ("Lilakoy may, mooy nga sàmm sa ngor", "Lilakoy may, mooy ngua samm sa ngor"),
    ("Njeexitalum juin bi", "Ndieekhitaloum diouin bi"),
    ("Daa nuru ku bég", "Daa nourou kou beg"),
    ("Duñu leen dàq", "Dougnou leen dakh"),
    ("Ñoo ànd ak órób", "Gnoo and ak orob"),
    ("Biñuy ubbi bànk bi", "Bignouy oubbi bank bi"),
]

# Prediction/reference rows of the qualitative evaluation fixture; the last
# two predictions miss only the accents (orob / bank).
EVAL_FIXTURE_ROWS = [
    ("Njeexitalum juin bi", "Njeexitalum juin bi"),
    ("Daa nuru ku bég", "Daa nuru ku bég"),
    ("Duñu leen dàq", "Duñu leen dàq"),
    ("Ñoo ànd ak orob", "Ñoo ànd ak órób"),
    ("Biñuy ubbi bank bi", "Biñuy ubbi bànk bi"),
]
