"""Sentence corpora: normalization, parallel loading, stratified splitting, persistence.

All text is kept in Unicode NFC with whitespace collapsed to single spaces,
so that downstream golden comparisons are byte-stable.
"""

from __future__ import annotations

import json
import random
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AlignmentError, CapacityError

SPLIT_NAMES = ("train", "valid", "test")

#: Width, in whitespace tokens, of one length stratum.
LENGTH_BUCKET_WIDTH = 5


@dataclass(frozen=True)
class Sentence:
    """A normalized sentence; ``id`` is its ordinal line number in its corpus.

    ``id`` is bookkeeping only and does not participate in equality, so a
    written-then-reloaded corpus compares equal pair by pair.
    """

    text: str
    id: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if self.text != _canonical(self.text):
            raise ValueError(f"sentence text is not normalized: {self.text!r}")


def _canonical(text: str) -> str:
    return " ".join(unicodedata.normalize("NFC", text).split())


def normalize_text(raw: str | bytes, id: int = 0) -> Sentence:
    """Collapse whitespace runs, strip ends, and normalize to NFC.

    Idempotent. Byte input is decoded as UTF-8; invalid bytes raise
    ``UnicodeDecodeError``, which carries the offending byte offset.
    """
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    return Sentence(text=_canonical(raw), id=id)


@dataclass(frozen=True)
class ParallelCorpus:
    """Line-aligned (source, target) sentence pairs with optional split labels."""

    pairs: tuple[tuple[Sentence, Sentence], ...]
    split_labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.split_labels is not None and len(self.split_labels) != len(self.pairs):
            raise AlignmentError(
                f"{len(self.split_labels)} labels for {len(self.pairs)} pairs"
            )

    def __len__(self) -> int:
        return len(self.pairs)

    def subset(self, label: str) -> "ParallelCorpus":
        if self.split_labels is None:
            raise ValueError("corpus has no split labels")
        kept = tuple(p for p, l in zip(self.pairs, self.split_labels) if l == label)
        return ParallelCorpus(pairs=kept)

    @property
    def sources(self) -> list[Sentence]:
        return [s for s, _ in self.pairs]

    @property
    def targets(self) -> list[Sentence]:
        return [t for _, t in self.pairs]


@dataclass(frozen=True)
class SplitSpec:
    """Requested train/valid/test sizes, RNG seed, and stratification key."""

    train_count: int
    valid_count: int
    test_count: int
    seed: int = 0
    strata_key: str = "length_bucket"  # or "none"

    def __post_init__(self) -> None:
        if min(self.train_count, self.valid_count, self.test_count) < 0:
            raise ValueError("split counts must be non-negative")
        if self.strata_key not in ("length_bucket", "none"):
            raise ValueError(f"unknown strata_key: {self.strata_key!r}")

    @property
    def counts(self) -> tuple[int, int, int]:
        return (self.train_count, self.valid_count, self.test_count)


def read_sentences(path: str | Path) -> list[Sentence]:
    """Read one normalized sentence per line."""
    data = Path(path).read_bytes()
    text = data.decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [normalize_text(line, id=i) for i, line in enumerate(lines)]


def load_parallel(source_path: str | Path, target_path: str | Path) -> ParallelCorpus:
    """Pair line i of the source file with line i of the target file."""
    sources = read_sentences(source_path)
    targets = read_sentences(target_path)
    if len(sources) != len(targets):
        raise AlignmentError(
            f"line counts differ: {source_path} has {len(sources)}, "
            f"{target_path} has {len(targets)}"
        )
    return ParallelCorpus(pairs=tuple(zip(sources, targets)))


def _stratum_of(pair: tuple[Sentence, Sentence], strata_key: str) -> int:
    if strata_key == "none":
        return 0
    # Bucket by target-side token count; the target side is the side every
    # experiment conditions on.
    return len(pair[1].text.split()) // LENGTH_BUCKET_WIDTH


def _allocate(
    counts: tuple[int, int, int], stratum_sizes: dict[int, int], total: int
) -> dict[tuple[int, int], int]:
    """Largest-remainder allocation of subset quotas across strata.

    Every cell ends within one pair of its exact proportional quota
    ``counts[s] * size_h / total``; column sums never exceed stratum sizes.
    """
    alloc: dict[tuple[int, int], int] = {}
    remainders: list[tuple[int, int, int]] = []  # (-remainder, subset, stratum)
    deficits = list(counts)
    used = {h: 0 for h in stratum_sizes}
    for s, want in enumerate(counts):
        for h, size_h in stratum_sizes.items():
            exact_num = want * size_h  # quota = exact_num / total
            base = exact_num // total
            alloc[(s, h)] = base
            deficits[s] -= base
            used[h] += base
            remainders.append((-(exact_num % total), s, h))
    remainders.sort()
    for _, s, h in remainders:
        if deficits[s] > 0 and used[h] < stratum_sizes[h]:
            alloc[(s, h)] += 1
            deficits[s] -= 1
            used[h] += 1
    # Capacity-bound leftovers (rare): place them anywhere with room.
    for _, s, h in remainders:
        while deficits[s] > 0 and used[h] < stratum_sizes[h]:
            alloc[(s, h)] += 1
            deficits[s] -= 1
            used[h] += 1
    return alloc


def stratified_split(corpus: ParallelCorpus, spec: SplitSpec) -> ParallelCorpus:
    """Label pairs train/valid/test with per-stratum proportions within one pair.

    Deterministic for a given (corpus, spec). Pairs beyond the requested
    counts stay unlabeled (empty label).
    """
    total = len(corpus)
    requested = sum(spec.counts)
    if requested > total:
        raise CapacityError(f"requested {requested} pairs from a corpus of {total}")

    strata: dict[int, list[int]] = {}
    for i, pair in enumerate(corpus.pairs):
        strata.setdefault(_stratum_of(pair, spec.strata_key), []).append(i)
    stratum_sizes = {h: len(ix) for h, ix in strata.items()}
    alloc = _allocate(spec.counts, stratum_sizes, total)

    rng = random.Random(spec.seed)
    labels = [""] * total
    for h in sorted(strata):
        indices = list(strata[h])
        rng.shuffle(indices)
        cursor = 0
        for s, name in enumerate(SPLIT_NAMES):
            take = alloc[(s, h)]
            for i in indices[cursor : cursor + take]:
                labels[i] = name
            cursor += take
    return ParallelCorpus(pairs=corpus.pairs, split_labels=tuple(labels))


def write_corpus(
    corpus: ParallelCorpus,
    out_dir: str | Path,
    manifest: dict | None = None,
) -> list[Path]:
    """Write ``<split>.src``/``<split>.tgt`` files (UTF-8, LF, one sentence/line).

    An unlabeled corpus is written as a single ``corpus.src``/``corpus.tgt``
    pair. ``manifest`` (seed, counts, ...) is written as ``split.json`` when
    given.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def dump(name: str, pairs: tuple[tuple[Sentence, Sentence], ...]) -> None:
        for suffix, side in ((".src", 0), (".tgt", 1)):
            path = out / f"{name}{suffix}"
            body = "".join(p[side].text + "\n" for p in pairs)
            path.write_bytes(body.encode("utf-8"))
            written.append(path)

    if corpus.split_labels is None:
        dump("corpus", corpus.pairs)
    else:
        for name in SPLIT_NAMES:
            dump(name, corpus.subset(name).pairs)
    if manifest is not None:
        path = out / "split.json"
        path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
        written.append(path)
    return written
