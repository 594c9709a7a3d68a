"""End-to-end experiment pipeline: noise, split, tokenize, model, correct, score.

Every stage persists its artifacts under the experiment directory, and the
whole run is a pure function of the configuration, so a rerun reproduces each
artifact byte for byte.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from . import segment
from .corpus import (
    ParallelCorpus,
    SplitSpec,
    load_parallel,
    read_sentences,
    stratified_split,
    write_corpus,
)
from .decoder import DecoderConfig, correct_corpus
from .errors import PipelineError, WospellError
from .evaluate import EvalReport, render_report, sentence_accuracy
from .lm import train_lm
from .rules import RewriteRuleSet, builtin_ruleset, compile_ruleset, noise_corpus

ENV_OUTPUT_DIR = "WOSPELL_OUTPUT_DIR"


@dataclass(frozen=True)
class ExperimentConfig:
    corpus: Path
    out_dir: Path
    rules: str = "beqi-v1"
    seed: int = 0
    train_count: int = 800
    valid_count: int = 100
    test_count: int = 100
    strata_key: str = "length_bucket"
    scheme_kind: str = "character"
    subword_vocab_size: int = 2000
    min_count: int | None = None
    lm_order: int = 5
    lm_smoothing: float = 0.1
    beam_width: int = 8
    lm_weight: float = 1.0
    max_candidates_per_span: int = 16
    threads: int = 1

    def resolved_min_count(self) -> int:
        if self.min_count is not None:
            return self.min_count
        return 2 if self.scheme_kind == "word" else 1

    def validate(self) -> None:
        if not Path(self.corpus).exists():
            raise WospellError(f"corpus file not found: {self.corpus}")
        if self.rules != "beqi-v1" and not Path(self.rules).exists():
            raise WospellError(f"rule file not found: {self.rules}")
        if self.scheme_kind not in segment.KINDS:
            raise WospellError(f"unknown scheme kind {self.scheme_kind!r}")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "ExperimentConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise WospellError(f"unknown config keys: {sorted(unknown)}")
        merged = {**doc, **{k: v for k, v in overrides.items() if v is not None}}
        if "out_dir" not in merged:
            env = os.environ.get(ENV_OUTPUT_DIR)
            if env:
                merged["out_dir"] = env
        merged["corpus"] = Path(merged["corpus"])
        merged["out_dir"] = Path(merged["out_dir"])
        return cls(**merged)


def load_rules(name_or_path: str) -> RewriteRuleSet:
    if name_or_path == "beqi-v1":
        return builtin_ruleset("beqi-v1")
    return compile_ruleset(name_or_path)


def _tokenize_split(
    split_dir: Path, out_dir: Path, scheme: segment.SegmentationScheme, min_count: int
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    train_sequences: list[list[str]] = []
    for split in ("train", "valid", "test"):
        for side in ("src", "tgt"):
            sentences = read_sentences(split_dir / f"{split}.{side}")
            token_lines = [segment.encode(s, scheme) for s in sentences]
            body = "".join(" ".join(tokens) + "\n" for tokens in token_lines)
            (out_dir / f"{split}.{side}").write_bytes(body.encode("utf-8"))
            if split == "train":
                train_sequences.extend(token_lines)
    vocab = segment.build_vocab(train_sequences, min_count=min_count)
    vocab.save(out_dir / "vocab.txt")
    scheme.save(out_dir)


def run_pipeline(config: ExperimentConfig) -> tuple[EvalReport, Path]:
    """Run every stage; returns the report and the artifact directory."""
    config.validate()
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def stage(name: str):
        class _Stage:
            def __enter__(self):
                return None

            def __exit__(self, exc_type, exc, tb):
                if exc is not None and not isinstance(exc, PipelineError):
                    raise PipelineError(name, exc) from exc
                return False

        return _Stage()

    with stage("noise"):
        rules = load_rules(config.rules)
        targets = read_sentences(config.corpus)
        parallel = noise_corpus(targets, rules)
        write_corpus(parallel, out / "noisy")

    with stage("split"):
        spec = SplitSpec(
            train_count=config.train_count,
            valid_count=config.valid_count,
            test_count=config.test_count,
            seed=config.seed,
            strata_key=config.strata_key,
        )
        labeled = stratified_split(parallel, spec)
        write_corpus(
            labeled,
            out / "splits",
            manifest={
                "seed": config.seed,
                "strata_key": config.strata_key,
                "counts": {
                    "train": config.train_count,
                    "valid": config.valid_count,
                    "test": config.test_count,
                },
            },
        )

    with stage("tokenize"):
        if config.scheme_kind == "subword":
            train_pairs = labeled.subset("train")
            scheme = segment.train_subword(
                train_pairs.sources + train_pairs.targets,
                target_vocab_size=config.subword_vocab_size,
            )
        else:
            scheme = segment.SegmentationScheme(kind=config.scheme_kind)
        _tokenize_split(
            out / "splits", out / "tokenized", scheme, config.resolved_min_count()
        )

    with stage("train-lm"):
        train_targets = labeled.subset("train").targets
        model = train_lm(train_targets, order=config.lm_order, k=config.lm_smoothing)
        model.save(out / "lm.json")

    with stage("correct"):
        cfg = DecoderConfig(
            beam_width=config.beam_width,
            lm_weight=config.lm_weight,
            max_candidates_per_span=config.max_candidates_per_span,
        )
        predictions_path = correct_corpus(
            out / "splits" / "test.src",
            rules,
            model,
            cfg,
            out_file=out / "predictions.txt",
            threads=config.threads,
        )

    with stage("evaluate"):
        test = load_parallel(out / "splits" / "test.src", out / "splits" / "test.tgt")
        predictions = read_sentences(predictions_path)
        accuracy = sentence_accuracy(predictions, test.targets)
        report = EvalReport(
            rows=(("noisy-channel", config.scheme_kind, accuracy),),
            metadata={
                "corpus_size": len(parallel),
                "test_size": len(test),
                "seed": config.seed,
                "ruleset": f"{rules.name}:{rules.version}",
                "lm_order": config.lm_order,
                "lm_smoothing": config.lm_smoothing,
                "beam_width": config.beam_width,
            },
        )
        (out / "report.json").write_text(report.to_json(), encoding="utf-8")
        (out / "report.txt").write_text(
            render_report(list(report.rows), "table"), encoding="utf-8"
        )

    return report, out
