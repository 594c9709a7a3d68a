"""Training loop with validation-based early stopping and a step cap."""

from __future__ import annotations

import dataclasses
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch import nn

from .data import (
    PAD_ID,
    ParallelData,
    SchemaError,
    Scheme,
    Vocab,
    batches,
    file_sha256,
    load_pairs,
)
from .models import LstmSeq2Seq, TransformerSeq2Seq


class TrainingFailure(RuntimeError):
    """Loss became non-finite; carries the offending step."""

    def __init__(self, step: int):
        super().__init__(f"non-finite loss at step {step}")
        self.step = step


@dataclass(frozen=True)
class TrainingConfig:
    architecture: str = "lstm"  # or "transformer"
    # LSTM geometry; paper-scale values are hidden=500, embedding=500.
    enc_layers: int = 2
    dec_layers: int = 2
    hidden: int = 64
    embedding: int = 64
    dropout: float = 0.3
    learning_rate: float = 1.0  # SGD
    # Transformer geometry (reduced; paper scale is 512/8/6/2048).
    tf_dim: int = 64
    tf_heads: int = 4
    tf_layers: int = 2
    tf_feedforward: int = 128
    tf_learning_rate: float = 0.05
    # Schedule.
    batch_size: int = 32
    max_steps: int = 30_000
    valid_interval: int = 50
    early_stop_patience: int = 4
    grad_clip: float = 5.0
    seed: int = 1

    def __post_init__(self) -> None:
        if self.architecture not in ("lstm", "transformer"):
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if self.early_stop_patience < 1:
            raise ValueError("early_stop_patience must be >= 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")

    @classmethod
    def paper_scale(cls, architecture: str = "lstm", **overrides) -> "TrainingConfig":
        defaults = dict(
            architecture=architecture,
            hidden=500,
            embedding=500,
            tf_dim=512,
            tf_heads=8,
            tf_layers=6,
            tf_feedforward=2048,
        )
        defaults.update(overrides)
        return cls(**defaults)


def build_model(config: TrainingConfig, vocab_size: int) -> nn.Module:
    if config.architecture == "lstm":
        return LstmSeq2Seq(
            vocab_size=vocab_size,
            embedding=config.embedding,
            hidden=config.hidden,
            enc_layers=config.enc_layers,
            dec_layers=config.dec_layers,
            dropout=config.dropout,
        )
    return TransformerSeq2Seq(
        vocab_size=vocab_size,
        dim=config.tf_dim,
        heads=config.tf_heads,
        layers=config.tf_layers,
        feedforward=config.tf_feedforward,
        dropout=config.dropout,
    )


def _validation_loss(model: nn.Module, data: ParallelData, config: TrainingConfig) -> float:
    criterion = nn.CrossEntropyLoss(ignore_index=PAD_ID, reduction="sum")
    model.eval()
    total = 0.0
    tokens = 0
    with torch.no_grad():
        for src, lengths, tgt_in, tgt_out in batches(data, config.batch_size):
            logits = model(src, lengths, tgt_in)
            total += float(criterion(logits.transpose(1, 2), tgt_out))
            tokens += int(tgt_out.ne(PAD_ID).sum())
    model.train()
    return total / max(1, tokens)


def train_model(run_dir: str | Path, config: TrainingConfig) -> Path:
    """Train on a tokenized run directory; returns the checkpoint path.

    Saves the checkpoint with the best validation loss, a JSON training log
    with one record per validation, and a run manifest. Stops after
    ``early_stop_patience`` consecutive validations without improvement or
    at ``max_steps`` optimization steps, whichever comes first.
    """
    run = Path(run_dir)
    vocab = Vocab.load(run / "vocab.txt")
    scheme = Scheme.load(run)
    train_data = load_pairs(run, "train", vocab)
    valid_data = load_pairs(run, "valid", vocab)
    if not len(train_data) or not len(valid_data):
        raise SchemaError("train and valid sets must be non-empty")

    torch.manual_seed(config.seed)
    model = build_model(config, len(vocab))
    model.train()
    lr = (
        config.learning_rate
        if config.architecture == "lstm"
        else config.tf_learning_rate
    )
    optimizer = torch.optim.SGD(model.parameters(), lr=lr)
    criterion = nn.CrossEntropyLoss(ignore_index=PAD_ID)
    shuffler = torch.Generator().manual_seed(config.seed)

    best_loss = math.inf
    non_improving = 0
    step = 0
    validations: list[dict] = []
    checkpoint_path = run / "checkpoint.pt"
    stop_reason = "max_steps"

    def validate() -> bool:
        nonlocal best_loss, non_improving
        loss = _validation_loss(model, valid_data, config)
        improved = loss < best_loss
        validations.append(
            {"step": step, "valid_loss": loss, "improved": improved}
        )
        if improved:
            best_loss = loss
            non_improving = 0
            torch.save(
                {
                    "model": model.state_dict(),
                    "config": dataclasses.asdict(config),
                    "vocab_size": len(vocab),
                    "scheme_kind": scheme.kind,
                    "best_valid_loss": best_loss,
                    "step": step,
                },
                checkpoint_path,
            )
        else:
            non_improving += 1
        return non_improving >= config.early_stop_patience

    training = True
    while training:
        for src, lengths, tgt_in, tgt_out in batches(
            train_data, config.batch_size, shuffle=True, generator=shuffler
        ):
            optimizer.zero_grad()
            logits = model(src, lengths, tgt_in)
            loss = criterion(logits.transpose(1, 2), tgt_out)
            if not torch.isfinite(loss):
                raise TrainingFailure(step)
            loss.backward()
            nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
            optimizer.step()
            step += 1
            if step % config.valid_interval == 0:
                if validate():
                    stop_reason = "early_stopping"
                    training = False
                    break
            if step >= config.max_steps:
                training = False
                break
    if not validations or validations[-1]["step"] != step:
        # Closing validation so short runs still have a checkpoint.
        if validate() and stop_reason == "max_steps" and step < config.max_steps:
            stop_reason = "early_stopping"

    log = {
        "steps": step,
        "stop_reason": stop_reason,
        "best_valid_loss": best_loss,
        "validations": validations,
    }
    (run / "training_log.json").write_text(
        json.dumps(log, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _write_manifest(run, config, best_loss, step)
    return checkpoint_path


def _write_manifest(
    run: Path, config: TrainingConfig, best_loss: float, steps: int
) -> None:
    data_files = sorted(
        p.name
        for p in run.iterdir()
        if p.suffix in (".src", ".tgt") or p.name in ("vocab.txt", "scheme.json")
    )
    manifest = {
        "config": dataclasses.asdict(config),
        "seed": config.seed,
        "steps": steps,
        "best_valid_loss": best_loss,
        "data_hashes": {name: file_sha256(run / name) for name in data_files},
        "created_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    (run / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def export_run_manifest(run_dir: str | Path) -> Path:
    """Validate a completed run and return its manifest path."""
    run = Path(run_dir)
    manifest_path = run / "manifest.json"
    for required in ("checkpoint.pt", "training_log.json", "manifest.json"):
        if not (run / required).exists():
            raise SchemaError(f"incomplete run: missing {required}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    for name, digest in manifest["data_hashes"].items():
        actual = file_sha256(run / name)
        if actual != digest:
            raise SchemaError(f"data hash mismatch for {name}")
    return manifest_path
