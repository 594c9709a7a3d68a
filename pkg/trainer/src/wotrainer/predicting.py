"""Greedy decoding of a test source into a detokenized predictions file."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import PAD_ID, SchemaError, Scheme, Vocab, read_token_lines
from .training import TrainingConfig, build_model


def load_checkpoint(path: str | Path) -> tuple[torch.nn.Module, TrainingConfig, dict]:
    payload = torch.load(Path(path), map_location="cpu", weights_only=False)
    config = TrainingConfig(**payload["config"])
    model = build_model(config, payload["vocab_size"])
    model.load_state_dict(payload["model"])
    model.eval()
    return model, config, payload


def predict(
    checkpoint: str | Path,
    test_source: str | Path,
    run_dir: str | Path,
    out_file: str | Path,
    batch_size: int = 64,
) -> Path:
    """Write one detokenized prediction per source line, aligned.

    ``run_dir`` supplies the vocabulary and segmentation scheme; the scheme
    kind must match the one the checkpoint was trained on.
    """
    run = Path(run_dir)
    vocab = Vocab.load(run / "vocab.txt")
    scheme = Scheme.load(run)
    model, _config, payload = load_checkpoint(checkpoint)
    if payload["vocab_size"] != len(vocab):
        raise SchemaError(
            f"checkpoint vocabulary size {payload['vocab_size']} differs from "
            f"{len(vocab)} in {run}"
        )
    if payload["scheme_kind"] != scheme.kind:
        raise SchemaError(
            f"checkpoint was trained on {payload['scheme_kind']!r} segmentation "
            f"but the run directory declares {scheme.kind!r}"
        )

    lines = read_token_lines(test_source)
    predictions: list[str] = []
    for start in range(0, len(lines), batch_size):
        chunk = [vocab.encode(t) for t in lines[start : start + batch_size]]
        if not chunk:
            continue
        width = max(1, max(len(s) for s in chunk))
        source = torch.full((len(chunk), width), PAD_ID, dtype=torch.long)
        for row, ids in enumerate(chunk):
            if ids:
                source[row, : len(ids)] = torch.tensor(ids, dtype=torch.long)
        max_len = 2 * width + 10
        for ids in model.greedy_decode(source, max_len):
            predictions.append(scheme.detokenize(vocab.decode(ids)))

    out_path = Path(out_file)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes("".join(p + "\n" for p in predictions).encode("utf-8"))
    return out_path
