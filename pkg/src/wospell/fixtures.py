"""Deterministic demo corpora: seeded sentence generators over fixed lexicons.

The Wolof list is written in the official orthography and deliberately covers
the characters the rewrite rules care about (accents, prenasals, doubled
letters, q/x, j+vowel onsets). The French list plays the role of the foreign
noise a scraped feed would contain. Generators are pure functions of their
seed, so fixture-based tests stay byte-stable.
"""

from __future__ import annotations

import random

from .corpus import Sentence, normalize_text

WOLOF_WORDS: tuple[str, ...] = (
    "ak", "altine", "am", "amul", "asamaan", "ba", "baax", "bal", "bank",
    "bàkk", "bàyyi", "bég", "benn", "bëgg", "bëccëg", "bi", "biddiiw", "bind",
    "bis", "bopp", "bu", "bul", "bunt", "ceeb", "ci", "daara", "dara", "daw",
    "dàq", "dee", "dem", "demal", "dégg", "dëgg", "dëkk", "dibéer", "dina",
    "dinaa", "dox", "doxal", "dugub", "dula", "duñu", "ëmb", "ëppal", "fan",
    "fas", "feebar", "fii", "fukk", "fóot", "gaal", "gaaw", "garab", "gerte",
    "gis", "gis-gis", "gën", "góor", "guddi", "jamono", "jant", "jàmm",
    "jàng", "jàngal", "jàpp", "jàppal", "jën", "jigéen", "jox", "julli",
    "juróom", "jërëjëf", "kan", "kaay", "kër", "ki", "kula", "lan", "lekk",
    "leen", "lépp", "li", "liggéey", "loo", "lu", "mag", "man", "may", "mbir",
    "mbedd", "meew", "mi", "mooy", "mu", "mukk", "muus", "naan", "naka",
    "nangu", "nañu", "ndax", "ndox", "nelaw", "nit", "nuru", "ñaar",
    "ñam", "ñaw", "ñépp", "ñett", "ñëw", "ñoo", "ñu", "picc", "rafet", "raw",
    "réew", "ree", "sa", "safara", "sama", "samm", "sàmm", "seen", "seetal",
    "si", "sol", "soxla", "suba", "suuf", "taaru", "tabax", "tànk", "te",
    "teg", "téeméer", "téere", "tey", "toog", "tool", "tur", "ubbi", "waaw",
    "waaye", "wax", "waxal", "weer", "wér", "woo", "woon", "xale", "xam",
    "xamal", "xamle", "xar", "xel", "xol", "yaay", "yi", "yii", "yëpp",
    "yombul", "yow", "yóbbu", "àdduna", "àll", "ànd",
)

FRENCH_WORDS: tuple[str, ...] = (
    "alors", "ami", "année", "après", "argent", "aujourd'hui", "aussi",
    "autre", "avant", "avec", "avoir", "beau", "beaucoup", "bien", "bon",
    "bonjour", "ce", "cette", "chaque", "chemin", "chez", "chose", "comme",
    "comment", "contre", "dans", "de", "depuis", "des", "deux", "dire",
    "donc", "du", "eau", "école", "elle", "encore", "enfant", "entre", "est",
    "et", "être", "faire", "famille", "femme", "feu", "fille", "fils", "fin",
    "français", "grand", "heure", "homme", "il", "ils", "jamais", "je",
    "jour", "la", "le", "les", "leur", "livre", "loin", "lui", "main",
    "maintenant", "mais", "maison", "mal", "manger", "matin", "mer", "mère",
    "mois", "moment", "monde", "mot", "nous", "nouveau", "nuit", "on", "ou",
    "où", "pain", "par", "parce", "parler", "pas", "pays", "pendant", "père",
    "petit", "peu", "peut", "place", "pour", "pourquoi", "premier", "près",
    "quand", "que", "qui", "rien", "route", "sans", "savoir", "semaine",
    "ses", "si", "soir", "son", "sous", "souvent", "sur", "temps", "terre",
    "toujours", "tout", "travail", "très", "trois", "trouver", "un", "une",
    "venir", "vie", "vieux", "ville", "voir", "vouloir", "vous", "vrai",
)

#: Compact lexicon for correction experiments. Small enough that a
#: 10k-sentence sample covers every word bigram, so language-model scores
#: over held-out text are driven by spelling, not sampling gaps. Includes
#: every rewrite trigger and one genuinely ambiguous pair (samm / sàmm).
DESK_WORDS: tuple[str, ...] = (
    "ak", "bal", "bi", "bind", "bopp", "ceeb", "ci", "dara", "dàq", "dem",
    "dox", "dugub", "duñu", "fukk", "gaal", "garab", "gerte", "gis", "góor",
    "guddi", "gën", "jamono", "jant", "jigéen", "jox", "jàmm", "jàng",
    "jàngal", "kër", "lekk", "lépp", "liggéey", "mag", "meew", "mooy",
    "mukk", "ndox", "nit", "nuru", "ñaar", "ñett", "ñépp", "ñëw", "picc",
    "rafet", "réew", "safara", "samm", "sàmm", "suba", "suuf", "taaru",
    "te", "tool", "ubbi", "waaye", "weer", "wér", "xale", "xam", "xel",
    "yaay", "yi", "àll", "ànd",
)

#: Characters of the official orthography, for synthetic-string generators.
OFFICIAL_ALPHABET = "aàbcdeéëfgijklmnñŋoópqrstuwxy"


def _sample_sentences(
    words: tuple[str, ...],
    n: int,
    seed: int,
    min_words: int,
    max_words: int,
    particle: str | None = None,
) -> list[Sentence]:
    rng = random.Random(seed)
    out: list[Sentence] = []
    for i in range(n):
        count = rng.randint(min_words, max_words)
        chosen = [rng.choice(words) for _ in range(count)]
        if particle is not None and rng.random() < 0.25:
            chosen.insert(rng.randrange(1, len(chosen) + 1), particle)
        text = " ".join(chosen)
        text = text[0].upper() + text[1:]
        out.append(normalize_text(text, id=i))
    return out


def official_sentences(
    n: int, seed: int = 0, min_words: int = 3, max_words: int = 9
) -> list[Sentence]:
    """Official-form Wolof sentences drawn from the fixed lexicon."""
    return _sample_sentences(
        WOLOF_WORDS, n, seed, min_words, max_words, particle="a"
    )


def desk_official_sentences(
    n: int, seed: int = 0, min_words: int = 3, max_words: int = 9
) -> list[Sentence]:
    """Official-form sentences over the compact correction-experiment lexicon."""
    return _sample_sentences(DESK_WORDS, n, seed, min_words, max_words, particle="a")


def french_sentences(
    n: int, seed: int = 0, min_words: int = 3, max_words: int = 9
) -> list[Sentence]:
    """French sentences drawn from the fixed lexicon."""
    return _sample_sentences(FRENCH_WORDS, n, seed, min_words, max_words)


def random_official_words(
    n: int, seed: int = 0, min_words: int = 1, max_words: int = 5
) -> list[Sentence]:
    """Random letter strings over the official alphabet with runs of at most 2.

    Exercises every rule trigger, including single-vowel tokens and capitals,
    without being tied to the lexicon.
    """
    rng = random.Random(seed)
    out: list[Sentence] = []
    for i in range(n):
        words = []
        for _ in range(rng.randint(min_words, max_words)):
            length = rng.randint(1, 7)
            chars: list[str] = []
            while len(chars) < length:
                c = rng.choice(OFFICIAL_ALPHABET)
                if len(chars) >= 2 and chars[-1] == c and chars[-2] == c:
                    continue
                chars.append(c)
                if rng.random() < 0.12 and not (
                    len(chars) >= 2 and chars[-2] == c
                ):
                    chars.append(c)
            words.append("".join(chars[:7]))
        if rng.random() < 0.3:
            words.insert(rng.randrange(len(words) + 1), rng.choice("aeiouàéó"))
        text = " ".join(words)
        if rng.random() < 0.5:
            text = text[0].upper() + text[1:]
        out.append(normalize_text(text, id=i))
    return out
