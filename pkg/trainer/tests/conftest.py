from __future__ import annotations

from pathlib import Path

import pytest

from wospell.fixtures import desk_official_sentences
from wospell.segment import SegmentationScheme, build_vocab, encode


def make_run_dir(
    base: Path,
    n_train: int = 50,
    n_valid: int = 10,
    seed: int = 56,
    min_words: int = 2,
    max_words: int = 3,
    copy_task: bool = True,
) -> Path:
    """Build a character-level tokenized run directory (source == target)."""
    run = base / "run"
    run.mkdir(parents=True, exist_ok=True)
    sentences = desk_official_sentences(
        n_train + n_valid, seed=seed, min_words=min_words, max_words=max_words
    )
    scheme = SegmentationScheme(kind="character")
    sequences = [encode(s, scheme) for s in sentences]
    lines = [" ".join(t) + "\n" for t in sequences]
    (run / "train.src").write_text("".join(lines[:n_train]), encoding="utf-8")
    (run / "train.tgt").write_text("".join(lines[:n_train]), encoding="utf-8")
    (run / "valid.src").write_text("".join(lines[n_train:]), encoding="utf-8")
    (run / "valid.tgt").write_text("".join(lines[n_train:]), encoding="utf-8")
    build_vocab(sequences, min_count=1).save(run / "vocab.txt")
    scheme.save(run)
    return run


@pytest.fixture()
def run_dir(tmp_path) -> Path:
    return make_run_dir(tmp_path)
