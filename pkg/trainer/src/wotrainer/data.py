"""Reading the toolkit's tokenized corpora, vocabularies, and schemes.

The training contract is purely file-based: a run directory holds
``train/valid[/test].src/.tgt`` with space-joined tokens, a ``vocab.txt``
(``token<TAB>count``, reserved tokens first) and a ``scheme.json`` naming
the segmentation kind and space marker. Predictions are detokenized back
to plain sentences with the same scheme.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import torch

PAD_ID, UNK_ID, BOS_ID, EOS_ID = 0, 1, 2, 3
RESERVED = ("<pad>", "<unk>", "<s>", "</s>")


class SchemaError(ValueError):
    """A run directory does not match the expected file contract."""


@dataclass(frozen=True)
class Vocab:
    token_to_id: dict[str, int]
    id_to_token: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.id_to_token)

    def encode(self, tokens: list[str]) -> list[int]:
        return [self.token_to_id.get(t, UNK_ID) for t in tokens]

    def decode(self, ids: list[int]) -> list[str]:
        return [self.id_to_token[i] for i in ids if 0 <= i < len(self.id_to_token)]

    @classmethod
    def load(cls, path: str | Path) -> "Vocab":
        tokens: list[str] = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            token, _, _count = line.rpartition("\t")
            tokens.append(token)
        if tuple(tokens[:4]) != RESERVED:
            raise SchemaError(
                f"{path}: expected reserved tokens {RESERVED} first, got {tokens[:4]}"
            )
        return cls(
            token_to_id={t: i for i, t in enumerate(tokens)},
            id_to_token=tuple(tokens),
        )


@dataclass(frozen=True)
class Scheme:
    kind: str
    space_marker: str

    @classmethod
    def load(cls, run_dir: str | Path) -> "Scheme":
        path = Path(run_dir) / "scheme.json"
        if not path.exists():
            raise SchemaError(f"missing scheme.json in {run_dir}")
        doc = json.loads(path.read_text(encoding="utf-8"))
        return cls(kind=doc["kind"], space_marker=doc["space_marker"])

    def detokenize(self, tokens: list[str]) -> str:
        body = [t for t in tokens if t not in ("<pad>", "<s>", "</s>")]
        if self.kind == "word":
            return " ".join(body)
        return "".join(body).replace(self.space_marker, " ").strip()


def read_token_lines(path: str | Path) -> list[list[str]]:
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.split() if line else [] for line in lines]


@dataclass(frozen=True)
class ParallelData:
    sources: list[list[int]]
    targets: list[list[int]]

    def __len__(self) -> int:
        return len(self.sources)


def load_pairs(run_dir: str | Path, split: str, vocab: Vocab) -> ParallelData:
    base = Path(run_dir)
    src_path, tgt_path = base / f"{split}.src", base / f"{split}.tgt"
    for p in (src_path, tgt_path):
        if not p.exists():
            raise SchemaError(f"missing {p}")
    sources = read_token_lines(src_path)
    targets = read_token_lines(tgt_path)
    if len(sources) != len(targets):
        raise SchemaError(
            f"{split}: {len(sources)} source lines vs {len(targets)} target lines"
        )
    return ParallelData(
        sources=[vocab.encode(t) for t in sources],
        targets=[vocab.encode(t) for t in targets],
    )


def batches(
    data: ParallelData,
    batch_size: int,
    shuffle: bool = False,
    generator: torch.Generator | None = None,
):
    """Yield (source, source_lengths, target_in, target_out) padded batches.

    Targets are wrapped as <s> ... </s>; ``target_in`` drops the last token,
    ``target_out`` drops the first, the usual teacher-forcing shift.
    """
    order = list(range(len(data)))
    if shuffle:
        perm = torch.randperm(len(order), generator=generator).tolist()
        order = [order[i] for i in perm]
    for start in range(0, len(order), batch_size):
        chunk = order[start : start + batch_size]
        src = [data.sources[i] for i in chunk]
        tgt = [[BOS_ID] + data.targets[i] + [EOS_ID] for i in chunk]
        max_src = max(1, max(len(s) for s in src))
        max_tgt = max(2, max(len(t) for t in tgt))
        src_tensor = torch.full((len(chunk), max_src), PAD_ID, dtype=torch.long)
        tgt_tensor = torch.full((len(chunk), max_tgt), PAD_ID, dtype=torch.long)
        lengths = torch.zeros(len(chunk), dtype=torch.long)
        for row, (s, t) in enumerate(zip(src, tgt)):
            src_tensor[row, : len(s)] = torch.tensor(s, dtype=torch.long)
            tgt_tensor[row, : len(t)] = torch.tensor(t, dtype=torch.long)
            lengths[row] = max(1, len(s))
        yield src_tensor, lengths, tgt_tensor[:, :-1], tgt_tensor[:, 1:]


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
