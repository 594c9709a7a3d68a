from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from wospell.corpus import normalize_text
from wospell.errors import ReservedSymbolError, TrainingError
from wospell.fixtures import official_sentences, random_official_words
from wospell.segment import (
    BOS_TOKEN,
    EOS_TOKEN,
    KINDS,
    PAD,
    RESERVED_TOKENS,
    SPACE_MARKER,
    UNK,
    UNK_ID,
    SegmentationScheme,
    Vocabulary,
    build_vocab,
    decode,
    encode,
    train_subword,
)


def _s(text: str):
    return normalize_text(text)


class TestCharacterAndWord:
    def test_character_encoding(self):
        scheme = SegmentationScheme(kind="character")
        assert encode(_s("bal bi"), scheme) == ["b", "a", "l", SPACE_MARKER, "b", "i"]

    def test_word_encoding(self):
        scheme = SegmentationScheme(kind="word")
        assert encode(_s("bal bi"), scheme) == ["bal", "bi"]

    def test_character_decode(self):
        scheme = SegmentationScheme(kind="character")
        tokens = ["b", "a", "l", SPACE_MARKER, "b", "i"]
        assert decode(tokens, scheme).text == "bal bi"

    def test_empty_token_list(self):
        for kind in KINDS:
            assert decode([], SegmentationScheme(kind=kind)).text == ""

    def test_unk_token_stays_visible(self):
        scheme = SegmentationScheme(kind="character")
        out = decode(["b", UNK, "l"], scheme)
        assert UNK in out.text

    def test_structural_reserved_tokens_dropped(self):
        scheme = SegmentationScheme(kind="word")
        out = decode([BOS_TOKEN, "bal", "bi", EOS_TOKEN, PAD], scheme)
        assert out.text == "bal bi"

    def test_marker_in_input_rejected(self):
        scheme = SegmentationScheme(kind="character")
        with pytest.raises(ReservedSymbolError):
            encode(_s(f"ba{SPACE_MARKER}l"), scheme)


class TestSubwordTraining:
    def test_hand_run_merge_sequence(self):
        # Derived by simulating the merge loop by hand and with the oracle:
        # pair (a,a) occurs 4 times, then (a,b) 3 times, then (aa,ab) twice.
        corpus = [_s("aaab"), _s("aaab"), _s("ab")]
        scheme = train_subword(corpus, target_vocab_size=6)
        assert scheme.merges == (("a", "a"), ("a", "b"), ("aa", "ab"))
        assert oracles.hand_bpe_training(["aaab", "aaab", "ab"], 6) == list(
            scheme.merges
        )

    def test_target_equals_base_inventory_means_no_merges(self):
        corpus = [_s("bal bi")]
        base = len(set("bal bi".replace(" ", SPACE_MARKER)))
        scheme = train_subword(corpus, target_vocab_size=base)
        assert scheme.merges == ()
        assert encode(_s("bal bi"), scheme) == encode(
            _s("bal bi"), SegmentationScheme(kind="character")
        )

    def test_stops_when_no_pair_repeats(self):
        scheme = train_subword([_s("ab")], target_vocab_size=100)
        assert scheme.merges == ()

    def test_empty_corpus_is_error(self):
        with pytest.raises(TrainingError):
            train_subword([], target_vocab_size=10)

    def test_target_below_inventory_is_error(self):
        with pytest.raises(TrainingError):
            train_subword([_s("abcdef")], target_vocab_size=3)

    def test_deterministic(self):
        corpus = official_sentences(100, seed=51)
        a = train_subword(corpus, target_vocab_size=80)
        b = train_subword(corpus, target_vocab_size=80)
        assert a.merges == b.merges

    def test_ties_break_lexicographically(self):
        # Both (x,y) and (y,x) occur twice; the smaller pair merges first.
        scheme = train_subword([_s("xyxy")], target_vocab_size=4)
        assert scheme.merges[0] == ("x", "y")

    def test_subword_encode_uses_merges(self):
        corpus = [_s("aaab"), _s("aaab"), _s("ab")]
        scheme = train_subword(corpus, target_vocab_size=6)
        assert encode(_s("aaab"), scheme) == ["aaab"]
        assert encode(_s("ab"), scheme) == ["ab"]
        assert encode(_s("ba"), scheme) == ["b", "a"]

    def test_priority_loop_matches_naive_in_order_application(self):
        corpus = official_sentences(150, seed=52)
        scheme = train_subword(corpus, target_vocab_size=120)
        for s in official_sentences(60, seed=53):
            stream = [
                SPACE_MARKER if c == " " else c for c in s.text
            ]
            assert encode(s, scheme) == oracles.naive_bpe_merge_apply(
                stream, scheme.merges
            )


class TestRoundTrip:
    @pytest.mark.parametrize("kind", KINDS)
    def test_fixture_sentences(self, kind):
        corpus = official_sentences(200, seed=61)
        if kind == "subword":
            scheme = train_subword(corpus, target_vocab_size=150)
        else:
            scheme = SegmentationScheme(kind=kind)
        for s in corpus:
            assert decode(encode(s, scheme), scheme) == s

    @pytest.mark.parametrize("kind", KINDS)
    def test_random_strings(self, kind):
        sample = random_official_words(300, seed=62)
        if kind == "subword":
            scheme = train_subword(sample, target_vocab_size=120)
        else:
            scheme = SegmentationScheme(kind=kind)
        for s in sample:
            assert decode(encode(s, scheme), scheme) == s

    @settings(max_examples=60, deadline=None)
    @given(st.text(alphabet="abë ñà", min_size=0, max_size=30))
    def test_property_round_trip(self, raw):
        s = normalize_text(raw)
        for kind in ("word", "character"):
            scheme = SegmentationScheme(kind=kind)
            assert decode(encode(s, scheme), scheme) == s


class TestVocabulary:
    def test_counting(self):
        vocab = build_vocab([["a", "b"], ["a"]], min_count=1)
        assert vocab.counts == {"a": 2, "b": 1}
        assert len(vocab) == len(RESERVED_TOKENS) + 2

    def test_threshold(self):
        vocab = build_vocab([["a", "b"], ["a"]], min_count=2)
        assert "b" not in vocab.token_to_id
        assert vocab.lookup("b") == UNK_ID

    def test_empty_input_reserved_only(self):
        vocab = build_vocab([], min_count=1)
        assert vocab.id_to_token == list(RESERVED_TOKENS)

    def test_reserved_ids_fixed(self):
        vocab = build_vocab([["a"]], min_count=1)
        assert vocab.token_to_id[PAD] == 0
        assert vocab.token_to_id[UNK] == 1
        assert vocab.token_to_id[BOS_TOKEN] == 2
        assert vocab.token_to_id[EOS_TOKEN] == 3

    def test_character_vocab_is_inventory_plus_marker_plus_reserved(self):
        corpus = official_sentences(80, seed=71)
        scheme = SegmentationScheme(kind="character")
        seqs = [encode(s, scheme) for s in corpus]
        vocab = build_vocab(seqs, min_count=1)
        inventory = {c for s in corpus for c in s.text if c != " "}
        expected = inventory | {SPACE_MARKER} | set(RESERVED_TOKENS)
        assert set(vocab.token_to_id) == expected

    def test_ids_contiguous_and_sorted_by_frequency(self):
        vocab = build_vocab([["b", "b", "b"], ["a", "a"], ["c"]], min_count=1)
        assert vocab.token_to_id["b"] == 4
        assert vocab.token_to_id["a"] == 5
        assert vocab.token_to_id["c"] == 6

    def test_save_load_round_trip(self, tmp_path):
        vocab = build_vocab([["a", "b", "b"]], min_count=1)
        path = tmp_path / "vocab.txt"
        vocab.save(path)
        back = Vocabulary.load(path)
        assert back.token_to_id == vocab.token_to_id
        assert back.counts["b"] == 2


class TestSchemePersistence:
    def test_subword_round_trip(self, tmp_path):
        scheme = train_subword(official_sentences(60, seed=81), target_vocab_size=60)
        scheme.save(tmp_path)
        back = SegmentationScheme.load(tmp_path)
        assert back == scheme

    def test_character_round_trip(self, tmp_path):
        scheme = SegmentationScheme(kind="character")
        scheme.save(tmp_path)
        assert SegmentationScheme.load(tmp_path) == scheme
