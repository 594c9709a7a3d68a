"""Word, subword, and character segmentation with exact round-trip decoding.

Character and subword modes replace spaces with a visible marker so that a
token stream stays losslessly decodable. Subword schemes are learned as
deterministic byte-pair style merges over whole-sentence character streams:
the most frequent adjacent pair is merged, lexicographically smallest pair
first on ties, until the vocabulary target is reached or no pair occurs at
least twice.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Sentence
from .errors import ReservedSymbolError, TrainingError

SPACE_MARKER = "▁"  # visually distinct, never legitimate corpus text

PAD, UNK, BOS_TOKEN, EOS_TOKEN = "<pad>", "<unk>", "<s>", "</s>"
RESERVED_TOKENS = (PAD, UNK, BOS_TOKEN, EOS_TOKEN)
PAD_ID, UNK_ID, BOS_ID, EOS_ID = 0, 1, 2, 3

KINDS = ("word", "subword", "character")

FILE_VERSION = 1


@dataclass(frozen=True)
class SegmentationScheme:
    kind: str
    merges: tuple[tuple[str, str], ...] = ()
    space_marker: str = SPACE_MARKER

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown segmentation kind {self.kind!r}")
        if len(set(self.merges)) != len(self.merges):
            raise ValueError("merge list contains duplicates")

    def save(self, out_dir: str | Path) -> list[Path]:
        """Write ``scheme.json`` plus ``merges.txt`` for subword schemes."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        doc = {
            "version": FILE_VERSION,
            "kind": self.kind,
            "space_marker": self.space_marker,
        }
        if self.kind == "subword":
            doc["merges_file"] = "merges.txt"
            merges_path = out / "merges.txt"
            merges_path.write_text(
                "".join(f"{a}\t{b}\n" for a, b in self.merges), encoding="utf-8"
            )
            written.append(merges_path)
        scheme_path = out / "scheme.json"
        scheme_path.write_text(json.dumps(doc, ensure_ascii=False, sort_keys=True))
        written.append(scheme_path)
        return written

    @classmethod
    def load(cls, scheme_dir: str | Path) -> "SegmentationScheme":
        base = Path(scheme_dir)
        doc = json.loads((base / "scheme.json").read_text(encoding="utf-8"))
        merges: tuple[tuple[str, str], ...] = ()
        if doc["kind"] == "subword":
            lines = (base / doc["merges_file"]).read_text(encoding="utf-8").splitlines()
            merges = tuple(tuple(line.split("\t", 1)) for line in lines if line)  # type: ignore[misc]
        return cls(kind=doc["kind"], merges=merges, space_marker=doc["space_marker"])


def _char_stream(text: str, marker: str) -> list[str]:
    return [marker if ch == " " else ch for ch in text]


def _check_marker(text: str, marker: str) -> None:
    if marker in text:
        raise ReservedSymbolError(
            f"sentence contains the reserved space marker {marker!r}"
        )


def _merge_once(tokens: list[str], pair: tuple[str, str]) -> list[str]:
    """Merge every non-overlapping occurrence of ``pair``, leftmost first."""
    a, b = pair
    out: list[str] = []
    i = 0
    n = len(tokens)
    while i < n:
        if i + 1 < n and tokens[i] == a and tokens[i + 1] == b:
            out.append(a + b)
            i += 2
        else:
            out.append(tokens[i])
            i += 1
    return out


def train_subword(
    train_sentences: list[Sentence], target_vocab_size: int
) -> SegmentationScheme:
    """Learn merges until the token inventory reaches ``target_vocab_size``.

    Stops early once no adjacent pair occurs at least twice. Deterministic:
    equal-frequency pairs are merged in lexicographic order.
    """
    if not train_sentences:
        raise TrainingError("cannot learn subwords from an empty corpus")
    weighted: Counter[tuple[str, ...]] = Counter()
    for sentence in train_sentences:
        _check_marker(sentence.text, SPACE_MARKER)
        weighted[tuple(_char_stream(sentence.text, SPACE_MARKER))] += 1

    inventory: set[str] = {t for seq in weighted for t in seq}
    if target_vocab_size < len(inventory):
        raise TrainingError(
            f"target vocabulary {target_vocab_size} is below the base character "
            f"inventory of {len(inventory)}"
        )

    sequences = {seq: (list(seq), count) for seq, count in weighted.items()}
    merges: list[tuple[str, str]] = []
    # Each accepted merge adds exactly one token to the inventory.
    while len(inventory) < target_vocab_size:
        pair_counts: Counter[tuple[str, str]] = Counter()
        for tokens, count in sequences.values():
            for left, right in zip(tokens, tokens[1:]):
                pair_counts[(left, right)] += count
        eligible = [(c, p) for p, c in pair_counts.items() if c >= 2]
        if not eligible:
            break
        best_count = max(c for c, _ in eligible)
        best_pair = min(p for c, p in eligible if c == best_count)
        merges.append(best_pair)
        inventory.add(best_pair[0] + best_pair[1])
        for key, (tokens, count) in sequences.items():
            sequences[key] = (_merge_once(tokens, best_pair), count)
    return SegmentationScheme(kind="subword", merges=tuple(merges))


def _apply_merges(tokens: list[str], merges: tuple[tuple[str, str], ...]) -> list[str]:
    """Apply learned merges by priority until none is applicable.

    Equivalent to replaying the merge list in order, but only pairs actually
    present in the sequence are visited.
    """
    if not merges or not tokens:
        return tokens
    ranks = {pair: i for i, pair in enumerate(merges)}
    while True:
        best_rank = None
        best_pair = None
        for pair in zip(tokens, tokens[1:]):
            rank = ranks.get(pair)
            if rank is not None and (best_rank is None or rank < best_rank):
                best_rank = rank
                best_pair = pair
        if best_pair is None:
            return tokens
        tokens = _merge_once(tokens, best_pair)


def encode(sentence: Sentence, scheme: SegmentationScheme) -> list[str]:
    """Segment a normalized sentence into tokens under the scheme."""
    text = sentence.text
    _check_marker(text, scheme.space_marker)
    if scheme.kind == "word":
        return text.split()
    stream = _char_stream(text, scheme.space_marker)
    if scheme.kind == "character":
        return stream
    return _apply_merges(stream, scheme.merges)


def decode(tokens: list[str], scheme: SegmentationScheme) -> Sentence:
    """Invert ``encode``; ``<unk>`` stays visible as its literal placeholder."""
    body = [t for t in tokens if t not in (PAD, BOS_TOKEN, EOS_TOKEN)]
    if scheme.kind == "word":
        return Sentence(text=" ".join(body))
    text = "".join(body).replace(scheme.space_marker, " ")
    return Sentence(text=text.strip())


@dataclass(frozen=True)
class Vocabulary:
    """Token inventory with contiguous ids; reserved symbols come first."""

    token_to_id: dict[str, int]
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for i, token in enumerate(RESERVED_TOKENS):
            if self.token_to_id.get(token) != i:
                raise ValueError(f"reserved token {token!r} must have id {i}")
        ids = sorted(self.token_to_id.values())
        if ids != list(range(len(ids))):
            raise ValueError("vocabulary ids must be contiguous from 0")

    def __len__(self) -> int:
        return len(self.token_to_id)

    def lookup(self, token: str) -> int:
        return self.token_to_id.get(token, UNK_ID)

    @property
    def id_to_token(self) -> list[str]:
        out = [""] * len(self.token_to_id)
        for token, i in self.token_to_id.items():
            out[i] = token
        return out

    def save(self, path: str | Path) -> None:
        lines = []
        for token in self.id_to_token:
            lines.append(f"{token}\t{self.counts.get(token, 0)}\n")
        Path(path).write_text("".join(lines), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        token_to_id: dict[str, int] = {}
        counts: dict[str, int] = {}
        for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines()):
            token, _, count = line.rpartition("\t")
            token_to_id[token] = i
            counts[token] = int(count)
        return cls(token_to_id=token_to_id, counts=counts)


def build_vocab(
    train_token_sequences: list[list[str]], min_count: int = 1
) -> Vocabulary:
    """Count tokens over all training sequences and keep those >= min_count.

    Tokens below threshold are absent and resolve to the ``<unk>`` id at
    lookup time. Source and target sequences should both be passed in: the
    inventory is shared.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts: Counter[str] = Counter()
    for seq in train_token_sequences:
        counts.update(seq)
    for reserved in RESERVED_TOKENS:
        counts.pop(reserved, None)
    kept = sorted(
        (t for t, c in counts.items() if c >= min_count),
        key=lambda t: (-counts[t], t),
    )
    token_to_id = {token: i for i, token in enumerate(RESERVED_TOKENS)}
    for token in kept:
        token_to_id[token] = len(token_to_id)
    return Vocabulary(
        token_to_id=token_to_id, counts={t: counts[t] for t in kept}
    )
