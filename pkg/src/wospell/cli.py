"""Command-line entry point; every pipeline stage is independently invocable."""

from __future__ import annotations

import argparse
import sys
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
from .decoder import DecoderConfig, correct_corpus, load_external_predictions
from .errors import PipelineError, WospellError
from .evaluate import char_error_rate, render_report, sentence_accuracy
from .langid import LangIdModel, classify, filter_corpus, train_langid
from .lm import NGramLanguageModel, perplexity, train_lm
from .pipeline import ENV_OUTPUT_DIR, ExperimentConfig, load_rules, run_pipeline
from .rules import dump_ruleset, noise_corpus


def _cmd_noise(args: argparse.Namespace) -> int:
    rules = load_rules(args.rules)
    targets = read_sentences(args.corpus)
    parallel = noise_corpus(targets, rules)
    Path(args.out_src).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out_src).write_text(
        "".join(s.text + "\n" for s in parallel.sources), encoding="utf-8"
    )
    Path(args.out_tgt).write_text(
        "".join(s.text + "\n" for s in parallel.targets), encoding="utf-8"
    )
    print(f"noised {len(parallel)} sentences")
    return 0


def _cmd_split(args: argparse.Namespace) -> int:
    corpus = load_parallel(args.src, args.tgt)
    spec = SplitSpec(
        train_count=args.train,
        valid_count=args.valid,
        test_count=args.test,
        seed=args.seed,
        strata_key=args.strata,
    )
    labeled = stratified_split(corpus, spec)
    write_corpus(
        labeled,
        args.out_dir,
        manifest={
            "seed": args.seed,
            "strata_key": args.strata,
            "counts": {"train": args.train, "valid": args.valid, "test": args.test},
        },
    )
    print(f"wrote splits to {args.out_dir}")
    return 0


def _cmd_tokenize(args: argparse.Namespace) -> int:
    from .pipeline import _tokenize_split

    split_dir = Path(args.split_dir)
    if args.kind == "subword":
        train = load_parallel(split_dir / "train.src", split_dir / "train.tgt")
        scheme = segment.train_subword(
            train.sources + train.targets, target_vocab_size=args.vocab_size
        )
    else:
        scheme = segment.SegmentationScheme(kind=args.kind)
    min_count = args.min_count
    if min_count is None:
        min_count = 2 if args.kind == "word" else 1
    _tokenize_split(split_dir, Path(args.out_dir), scheme, min_count)
    print(f"tokenized ({args.kind}) into {args.out_dir}")
    return 0


def _cmd_train_lm(args: argparse.Namespace) -> int:
    sentences = read_sentences(args.corpus)
    model = train_lm(sentences, order=args.order, k=args.smoothing)
    model.save(args.out)
    print(f"trained order-{args.order} model on {len(sentences)} sentences")
    return 0


def _cmd_ppl(args: argparse.Namespace) -> int:
    model = NGramLanguageModel.load(args.lm)
    sentences = read_sentences(args.corpus)
    print(f"{perplexity(model, sentences):.4f}")
    return 0


def _cmd_train_langid(args: argparse.Namespace) -> int:
    labeled = []
    for line in Path(args.labeled).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        label, _, text = line.partition("\t")
        from .corpus import normalize_text

        labeled.append((normalize_text(text), label))
    model = train_langid(labeled, order=args.order, smoothing=args.smoothing)
    model.save(args.out)
    print(f"trained identifier for labels {', '.join(model.labels)}")
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    model = LangIdModel.load(args.model)
    for sentence in read_sentences(args.corpus):
        label, _ = classify(model, sentence)
        print(label if label is not None else "")
    return 0


def _cmd_filter(args: argparse.Namespace) -> int:
    model = LangIdModel.load(args.model)
    kept = filter_corpus(model, read_sentences(args.corpus), keep=args.keep)
    body = "".join(s.text + "\n" for s in kept)
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)
    return 0


def _cmd_correct(args: argparse.Namespace) -> int:
    rules = load_rules(args.rules)
    model = NGramLanguageModel.load(args.lm)
    cfg = DecoderConfig(
        beam_width=args.beam_width,
        lm_weight=args.lm_weight,
        max_candidates_per_span=args.max_candidates_per_span,
    )
    out = correct_corpus(
        args.corpus, rules, model, cfg, out_file=args.out, threads=args.threads
    )
    print(f"wrote {out}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    references = read_sentences(args.references)
    predictions = load_external_predictions(args.predictions, len(references))
    accuracy = sentence_accuracy(predictions, references)
    rows = [(args.model_name, args.scheme_name, accuracy)]
    output = render_report(rows, args.format)
    sys.stdout.write(output)
    if args.cer:
        print(f"character error rate: {char_error_rate(predictions, references):.4f}")
    return 0


def _cmd_dump_rules(args: argparse.Namespace) -> int:
    sys.stdout.write(dump_ruleset(load_rules(args.rules)))
    return 0


def _cmd_pipeline(args: argparse.Namespace) -> int:
    overrides = {
        "out_dir": args.out_dir,
        "seed": args.seed,
        "beam_width": args.beam_width,
        "lm_weight": args.lm_weight,
        "threads": args.threads,
    }
    config = ExperimentConfig.from_file(args.config, **overrides)
    report, out = run_pipeline(config)
    sys.stdout.write(render_report(list(report.rows), args.format))
    print(f"artifacts in {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wospell",
        description="Wolof spelling toolkit: noising, splitting, segmentation, "
        "language modeling, lattice correction, and evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("noise", help="rewrite official text into its noisy form")
    p.add_argument("corpus", help="official-form text, one sentence per line")
    p.add_argument("--rules", default="beqi-v1", help="built-in name or rule file")
    p.add_argument("--out-src", required=True, help="noisy output file")
    p.add_argument("--out-tgt", required=True, help="official output file")
    p.set_defaults(func=_cmd_noise)

    p = sub.add_parser("split", help="stratified train/valid/test split")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--train", type=int, required=True)
    p.add_argument("--valid", type=int, required=True)
    p.add_argument("--test", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strata", default="length_bucket", choices=["length_bucket", "none"])
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("tokenize", help="segment a split directory")
    p.add_argument("split_dir", help="directory holding <split>.src/.tgt files")
    p.add_argument("--kind", default="character", choices=list(segment.KINDS))
    p.add_argument("--vocab-size", type=int, default=2000)
    p.add_argument("--min-count", type=int, default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_tokenize)

    p = sub.add_parser("train-lm", help="train a character n-gram model")
    p.add_argument("corpus")
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--smoothing", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train_lm)

    p = sub.add_parser("ppl", help="perplexity of a corpus under a model")
    p.add_argument("corpus")
    p.add_argument("--lm", required=True)
    p.set_defaults(func=_cmd_ppl)

    p = sub.add_parser("train-langid", help="train the language identifier")
    p.add_argument("labeled", help="TSV file: label<TAB>sentence per line")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--smoothing", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train_langid)

    p = sub.add_parser("classify", help="print the label of each sentence")
    p.add_argument("corpus")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("filter", help="keep only sentences of one language")
    p.add_argument("corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--keep", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("correct", help="lattice + LM correction of noisy text")
    p.add_argument("corpus", help="noisy text, one sentence per line")
    p.add_argument("--rules", default="beqi-v1")
    p.add_argument("--lm", required=True)
    p.add_argument("--beam-width", type=int, default=8)
    p.add_argument("--lm-weight", type=float, default=1.0)
    p.add_argument("--max-candidates-per-span", type=int, default=16)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_correct)

    p = sub.add_parser("evaluate", help="sentence accuracy of predictions")
    p.add_argument("predictions")
    p.add_argument("references")
    p.add_argument("--format", default="table", choices=["table", "json"])
    p.add_argument("--model-name", default="external")
    p.add_argument("--scheme-name", default="none")
    p.add_argument("--cer", action="store_true", help="also print character error rate")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("dump-rules", help="print a rule set in rule-file format")
    p.add_argument("--rules", default="beqi-v1")
    p.set_defaults(func=_cmd_dump_rules)

    p = sub.add_parser(
        "pipeline",
        help="run noise, split, tokenize, train-lm, correct, evaluate",
        description=f"Output directory defaults to ${ENV_OUTPUT_DIR} when the "
        "config omits out_dir.",
    )
    p.add_argument("config", help="experiment configuration (JSON)")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--beam-width", type=int, default=None)
    p.add_argument("--lm-weight", type=float, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--format", default="table", choices=["table", "json"])
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except WospellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
