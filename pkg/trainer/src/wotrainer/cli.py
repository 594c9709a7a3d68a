"""Command-line interface: train, predict, manifest."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .data import SchemaError
from .predicting import predict
from .training import TrainingConfig, TrainingFailure, export_run_manifest, train_model


def _config_from_args(args: argparse.Namespace) -> TrainingConfig:
    if args.paper_scale:
        base = TrainingConfig.paper_scale(architecture=args.architecture)
    else:
        base = TrainingConfig(architecture=args.architecture)
    overrides = {
        name: getattr(args, name)
        for name in (
            "hidden",
            "embedding",
            "dropout",
            "learning_rate",
            "batch_size",
            "max_steps",
            "valid_interval",
            "early_stop_patience",
            "seed",
        )
        if getattr(args, name) is not None
    }
    return dataclasses.replace(base, **overrides)


def _cmd_train(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    checkpoint = train_model(args.run_dir, config)
    print(f"checkpoint written to {checkpoint}")
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    out = predict(args.checkpoint, args.test_source, args.run_dir, args.out)
    print(f"predictions written to {out}")
    return 0


def _cmd_manifest(args: argparse.Namespace) -> int:
    path = export_run_manifest(args.run_dir)
    print(path.read_text(encoding="utf-8"), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wotrainer",
        description="Train seq2seq spelling correctors on wospell tokenized "
        "run directories and emit aligned prediction files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on a tokenized run directory")
    p.add_argument("run_dir", help="directory with train/valid .src/.tgt, vocab.txt, scheme.json")
    p.add_argument("--architecture", default="lstm", choices=["lstm", "transformer"])
    p.add_argument("--paper-scale", action="store_true",
                   help="use full-size model dimensions instead of toy defaults")
    p.add_argument("--hidden", type=int, default=None)
    p.add_argument("--embedding", type=int, default=None)
    p.add_argument("--dropout", type=float, default=None)
    p.add_argument("--learning-rate", type=float, default=None, dest="learning_rate")
    p.add_argument("--batch-size", type=int, default=None, dest="batch_size")
    p.add_argument("--max-steps", type=int, default=None, dest="max_steps")
    p.add_argument("--valid-interval", type=int, default=None, dest="valid_interval")
    p.add_argument("--patience", type=int, default=None, dest="early_stop_patience")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="decode a tokenized test source")
    p.add_argument("checkpoint")
    p.add_argument("test_source")
    p.add_argument("--run-dir", required=True, help="directory with vocab.txt and scheme.json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("manifest", help="verify and print a run manifest")
    p.add_argument("run_dir")
    p.set_defaults(func=_cmd_manifest)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, TrainingFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
