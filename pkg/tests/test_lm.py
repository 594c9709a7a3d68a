from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from wospell.corpus import normalize_text
from wospell.errors import TrainingError, UndefinedMetricError
from wospell.fixtures import official_sentences
from wospell.lm import BOS, EOS, NGramLanguageModel, perplexity, score, train_lm


def _s(text: str):
    return normalize_text(text)


@pytest.fixture(scope="module")
def ab_model():
    # One training sentence "ab", order 2, add-one smoothing. Alphabet is
    # {a, b, BOS, EOS}, so every denominator adds 4 smoothing slots.
    return train_lm([_s("ab")], order=2, k=1.0)


class TestHandComputedConditionals:
    def test_alphabet(self, ab_model):
        assert ab_model.alphabet == frozenset({"a", "b", BOS, EOS})

    def test_seen_transition(self, ab_model):
        # count(a -> b) = 1, count(a -> *) = 1: (1+1)/(1+4)
        assert ab_model.prob("a", "b") == pytest.approx(0.4, abs=1e-12)

    def test_start_transition(self, ab_model):
        assert ab_model.prob(BOS, "a") == pytest.approx(0.4, abs=1e-12)

    def test_end_transition(self, ab_model):
        assert ab_model.prob("b", EOS) == pytest.approx(0.4, abs=1e-12)

    def test_unseen_symbol_in_seen_context(self, ab_model):
        assert ab_model.prob("a", "a") == pytest.approx(0.2, abs=1e-12)

    def test_unseen_context_uniform(self, ab_model):
        assert ab_model.prob("z", "a") == pytest.approx(0.25, abs=1e-12)

    def test_score_is_sum_of_logs(self, ab_model):
        expected = math.log(0.4) * 3
        assert ab_model.score(_s("ab")) == pytest.approx(expected, abs=1e-12)
        assert score(ab_model, "ab") == pytest.approx(expected, abs=1e-12)

    def test_score_empty_sentence(self, ab_model):
        # P(EOS | BOS) = (0+1)/(1+4)
        assert ab_model.score(_s("")) == pytest.approx(math.log(0.2), abs=1e-12)

    def test_appending_strictly_decreases(self, ab_model):
        for text in ("", "a", "ab", "abba"):
            assert ab_model.score(text + "x") < ab_model.score(text)


class TestNormalization:
    def test_every_stored_context_sums_to_one(self, ab_model):
        for context in ab_model.counts:
            total = sum(ab_model.prob(context, sym) for sym in ab_model.alphabet)
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_sampled_contexts_on_fixture_corpus(self):
        model = train_lm(official_sentences(300, seed=1), order=3, k=0.5)
        rng = random.Random(0)
        contexts = rng.sample(sorted(model.counts), k=min(1000, len(model.counts)))
        for context in contexts:
            total = sum(model.prob(context, sym) for sym in model.alphabet)
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_unseen_bucket_variant_sums_with_bucket(self):
        model = train_lm(
            official_sentences(50, seed=2), order=3, k=0.5, reserve_unseen=True
        )
        for context in list(model.counts)[:200]:
            in_alphabet = sum(model.prob(context, sym) for sym in model.alphabet)
            unseen = model.prob(context, "⚡")
            assert in_alphabet + unseen == pytest.approx(1.0, abs=1e-9)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.text(alphabet="abcd", min_size=1, max_size=8), min_size=1, max_size=6))
    def test_normalization_property(self, texts):
        model = train_lm([_s(t) for t in texts], order=2, k=0.25)
        for context in model.counts:
            total = sum(model.prob(context, sym) for sym in model.alphabet)
            assert total == pytest.approx(1.0, abs=1e-9)


class TestTrainErrors:
    def test_order_zero(self):
        with pytest.raises(TrainingError):
            train_lm([_s("ab")], order=0, k=1.0)

    def test_empty_corpus(self):
        with pytest.raises(TrainingError):
            train_lm([], order=2, k=1.0)


class TestPerplexity:
    def test_uniform_model_perplexity_is_alphabet_size(self):
        model = NGramLanguageModel.uniform({"a", "b"}, order=2, smoothing=1.0)
        assert len(model.alphabet) == 4
        for text in ("ab", "ba", "aaaa", ""):
            assert perplexity(model, [_s(text)]) == pytest.approx(4.0, abs=1e-9)

    def test_repeated_character_approaches_one(self):
        # With k=0 and a single repeated character, only the end transition
        # carries surprise, which washes out as the text grows.
        short = train_lm([_s("aa")], order=1, k=0.0)
        long = train_lm([_s("a" * 400)], order=1, k=0.0)
        assert perplexity(long, [_s("a" * 400)]) < perplexity(short, [_s("aa")])
        assert perplexity(long, [_s("a" * 400)]) == pytest.approx(1.0, abs=0.05)

    def test_training_text_beats_shuffled_text(self):
        sentences = official_sentences(500, seed=3)
        model = train_lm(sentences, order=4, k=0.5)
        rng = random.Random(7)
        shuffled = []
        for s in sentences:
            chars = list(s.text.replace(" ", ""))
            rng.shuffle(chars)
            shuffled.append(_s("".join(chars)))
        assert perplexity(model, sentences) <= perplexity(model, shuffled)

    def test_empty_set_is_error(self, ab_model):
        with pytest.raises(UndefinedMetricError):
            perplexity(ab_model, [])


class TestPersistence:
    def test_round_trip(self, tmp_path, ab_model):
        path = tmp_path / "lm.json"
        ab_model.save(path)
        back = NGramLanguageModel.load(path)
        assert back.order == ab_model.order
        assert back.alphabet == ab_model.alphabet
        assert back.prob("a", "b") == ab_model.prob("a", "b")
        assert back.score(_s("ab")) == ab_model.score(_s("ab"))

    def test_version_check(self, tmp_path):
        path = tmp_path / "lm.json"
        path.write_text('{"version": 99}')
        with pytest.raises(TrainingError, match="version"):
            NGramLanguageModel.load(path)

    def test_deterministic_serialization(self, tmp_path):
        model = train_lm(official_sentences(50, seed=4), order=3, k=0.5)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        model.save(a)
        model.save(b)
        assert a.read_bytes() == b.read_bytes()


def test_score_additive_over_matching_windows():
    # With order 2 the context is one character, so scores decompose around
    # any interior character boundary.
    model = train_lm([_s("abab"), _s("bab")], order=2, k=0.5)
    logp_full, ctx = model.extend(model.start_context(), "abab")
    left, mid_ctx = model.extend(model.start_context(), "ab")
    right, ctx2 = model.extend(mid_ctx, "ab")
    assert left + right == pytest.approx(logp_full, abs=1e-12)
    assert ctx == ctx2
