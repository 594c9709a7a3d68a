from __future__ import annotations

import unicodedata
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from wospell.corpus import (
    ParallelCorpus,
    Sentence,
    SplitSpec,
    load_parallel,
    normalize_text,
    read_sentences,
    stratified_split,
    write_corpus,
)
from wospell.errors import AlignmentError, CapacityError
from wospell.fixtures import official_sentences


class TestNormalize:
    def test_collapses_whitespace(self):
        assert normalize_text("  bal   bi ").text == "bal bi"

    def test_already_normalized_unchanged(self):
        assert normalize_text("Jàppal bal bi").text == "Jàppal bal bi"

    def test_empty(self):
        assert normalize_text("").text == ""

    def test_tabs_and_newlines_collapse(self):
        assert normalize_text("a\t b\n\nc").text == "a b c"

    def test_nfc_canonicalization(self):
        decomposed = unicodedata.normalize("NFD", "gën à ndóol")
        assert decomposed != "gën à ndóol"
        assert normalize_text(decomposed).text == "gën à ndóol"

    def test_bytes_input_decodes(self):
        assert normalize_text("ëmb".encode("utf-8")).text == "ëmb"

    def test_invalid_bytes_report_offset(self):
        with pytest.raises(UnicodeDecodeError) as err:
            normalize_text(b"ab\xff")
        assert err.value.start == 2

    @given(st.text(max_size=80))
    def test_idempotent(self, raw):
        once = normalize_text(raw).text
        assert normalize_text(once).text == once


class TestLoadParallel:
    def test_pairs_by_line(self, tmp_path):
        (tmp_path / "a.src").write_text("one\ntwo\nthree\nfour\nfive\n")
        (tmp_path / "a.tgt").write_text("un\ndeux\ntrois\nquatre\ncinq\n")
        corpus = load_parallel(tmp_path / "a.src", tmp_path / "a.tgt")
        assert len(corpus) == 5
        assert corpus.pairs[2][0].text == "three"
        assert corpus.pairs[2][1].text == "trois"

    def test_unequal_counts_raise(self, tmp_path):
        (tmp_path / "a.src").write_text("one\ntwo\nthree\nfour\nfive\n")
        (tmp_path / "a.tgt").write_text("un\ndeux\ntrois\nquatre\n")
        with pytest.raises(AlignmentError, match="5"):
            load_parallel(tmp_path / "a.src", tmp_path / "a.tgt")

    def test_two_empty_files(self, tmp_path):
        (tmp_path / "a.src").write_text("")
        (tmp_path / "a.tgt").write_text("")
        assert len(load_parallel(tmp_path / "a.src", tmp_path / "a.tgt")) == 0

    def test_missing_file_raises(self, tmp_path):
        (tmp_path / "a.src").write_text("x\n")
        with pytest.raises(OSError):
            load_parallel(tmp_path / "a.src", tmp_path / "missing.tgt")


def _corpus_of(texts: list[str]) -> ParallelCorpus:
    pairs = tuple(
        (normalize_text(t, id=i), normalize_text(t, id=i)) for i, t in enumerate(texts)
    )
    return ParallelCorpus(pairs=pairs)


def _label_counts(corpus: ParallelCorpus) -> Counter:
    return Counter(corpus.split_labels)


class TestStratifiedSplit:
    def test_degenerate_all_train(self):
        corpus = _corpus_of([f"w{i}" for i in range(10)])
        labeled = stratified_split(corpus, SplitSpec(10, 0, 0, seed=1))
        assert _label_counts(labeled)["train"] == 10

    def test_capacity_error(self):
        corpus = _corpus_of([f"w{i}" for i in range(10)])
        with pytest.raises(CapacityError):
            stratified_split(corpus, SplitSpec(9, 1, 1, seed=1))

    def test_exact_sizes_and_partition(self):
        corpus = _corpus_of([f"word{i} " * (i % 13 + 1) for i in range(500)])
        labeled = stratified_split(corpus, SplitSpec(400, 50, 25, seed=9))
        counts = _label_counts(labeled)
        assert counts["train"] == 400
        assert counts["valid"] == 50
        assert counts["test"] == 25
        assert counts[""] == 25  # the rest stays unlabeled

    def test_deterministic(self):
        corpus = _corpus_of([f"word{i} " * (i % 7 + 1) for i in range(200)])
        spec = SplitSpec(150, 30, 20, seed=42)
        first = stratified_split(corpus, spec)
        second = stratified_split(corpus, spec)
        assert first.split_labels == second.split_labels

    def test_seed_changes_assignment(self):
        corpus = _corpus_of([f"word{i} " * (i % 7 + 1) for i in range(200)])
        a = stratified_split(corpus, SplitSpec(150, 30, 20, seed=1))
        b = stratified_split(corpus, SplitSpec(150, 30, 20, seed=2))
        assert a.split_labels != b.split_labels

    def test_bimodal_proportions_within_one(self):
        # 600 short (1 token) + 400 long (11 tokens) sentences: strata are
        # recounted here independently of the implementation's bucketing.
        texts = ["kan"] * 600 + ["benn ñaar ñett " * 3 + "kan"] * 400
        corpus = _corpus_of(texts)
        labeled = stratified_split(
            corpus, SplitSpec(800, 100, 100, seed=3, strata_key="length_bucket")
        )
        for name, want in (("train", 800), ("valid", 100), ("test", 100)):
            subset = labeled.subset(name)
            short = sum(1 for _, t in subset.pairs if len(t.text.split()) < 6)
            long = len(subset) - short
            assert abs(short - want * 0.6) <= 1
            assert abs(long - want * 0.4) <= 1

    def test_none_strata_uniform(self):
        corpus = _corpus_of([f"w{i}" for i in range(100)])
        labeled = stratified_split(
            corpus, SplitSpec(50, 25, 25, seed=5, strata_key="none")
        )
        counts = _label_counts(labeled)
        assert counts == Counter(train=50, valid=25, test=25)


class TestWriteCorpus:
    def test_labeled_corpus_six_files(self, tmp_path):
        corpus = _corpus_of([f"word{i}" for i in range(30)])
        labeled = stratified_split(corpus, SplitSpec(20, 5, 5, seed=0))
        written = write_corpus(labeled, tmp_path)
        names = sorted(p.name for p in written)
        assert names == [
            "test.src", "test.tgt", "train.src", "train.tgt", "valid.src", "valid.tgt",
        ]

    def test_unlabeled_corpus_two_files(self, tmp_path):
        corpus = _corpus_of(["bal bi", "xale yi"])
        written = write_corpus(corpus, tmp_path)
        assert sorted(p.name for p in written) == ["corpus.src", "corpus.tgt"]

    def test_round_trip_unlabeled(self, tmp_path):
        corpus = _corpus_of(["bal bi", "xale yi", "gën a taaru"])
        write_corpus(corpus, tmp_path)
        back = load_parallel(tmp_path / "corpus.src", tmp_path / "corpus.tgt")
        assert back.pairs == corpus.pairs

    def test_round_trip_per_split(self, tmp_path):
        corpus = _corpus_of([f"word{i} bal" for i in range(40)])
        labeled = stratified_split(corpus, SplitSpec(30, 5, 5, seed=2))
        write_corpus(labeled, tmp_path)
        for name in ("train", "valid", "test"):
            back = load_parallel(tmp_path / f"{name}.src", tmp_path / f"{name}.tgt")
            assert back.pairs == labeled.subset(name).pairs

    def test_manifest_written(self, tmp_path):
        corpus = _corpus_of(["bal bi"])
        write_corpus(corpus, tmp_path, manifest={"seed": 7})
        assert (tmp_path / "split.json").exists()

    def test_lf_and_utf8(self, tmp_path):
        corpus = _corpus_of(["gën à"])
        write_corpus(corpus, tmp_path)
        raw = (tmp_path / "corpus.src").read_bytes()
        assert raw == "gën à\n".encode("utf-8")


def test_read_sentences_assigns_ids(tmp_path):
    (tmp_path / "f.txt").write_text("a\nb\nc\n")
    sentences = read_sentences(tmp_path / "f.txt")
    assert [s.id for s in sentences] == [0, 1, 2]


def test_sentence_equality_ignores_id():
    assert normalize_text("bal", id=3) == normalize_text("bal", id=9)
