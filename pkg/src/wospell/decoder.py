"""Noisy-channel decoding: search the candidate lattice under an n-gram LM.

Hypotheses advance position-synchronously over the noisy sentence. At each
consumed position, hypotheses sharing the same LM context are merged
(identical futures, so keeping the better prefix is exact) and the survivors
are pruned to the beam width. With a beam at least as wide as the number of
live contexts at every step this equals exhaustive search. Ties prefer the
higher channel score, then the lexicographically smallest output.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .corpus import Sentence, normalize_text, read_sentences
from .errors import AlignmentError
from .lattice import CandidateLattice, InverseTable, build_lattice, invert_ruleset
from .lm import NGramLanguageModel
from .rules import RewriteRuleSet


@dataclass(frozen=True)
class Hypothesis:
    consumed: int
    produced: str
    channel_logp: float
    lm_logp: float
    lm_state: str

    def score(self, lm_weight: float) -> float:
        return lm_weight * self.lm_logp + self.channel_logp


@dataclass(frozen=True)
class DecoderConfig:
    beam_width: int = 8
    lm_weight: float = 1.0
    max_candidates_per_span: int = 16

    def __post_init__(self) -> None:
        if self.beam_width < 1:
            raise ValueError(f"beam_width must be >= 1, got {self.beam_width}")
        if self.lm_weight <= 0:
            raise ValueError(f"lm_weight must be positive, got {self.lm_weight}")
        if self.max_candidates_per_span < 1:
            raise ValueError("max_candidates_per_span must be >= 1")


def _rank_key(h: Hypothesis, lm_weight: float) -> tuple[float, float, str]:
    # Sorting ascending on this key puts the preferred hypothesis first.
    return (-h.score(lm_weight), -h.channel_logp, h.produced)


def _capped_arcs(lattice: CandidateLattice, position: int, cap: int):
    arcs = lattice.arcs[position]
    by_span: dict[int, int] = {}
    for arc in sorted(arcs, key=lambda a: (a.span, -a.weight, a.candidate)):
        taken = by_span.get(arc.span, 0)
        if taken < cap:
            by_span[arc.span] = taken + 1
            yield arc


def decode(
    noisy: Sentence,
    lattice: CandidateLattice,
    lm: NGramLanguageModel,
    cfg: DecoderConfig = DecoderConfig(),
) -> Sentence:
    """Best full lattice path under lm_weight * LM + channel scores."""
    n = len(noisy.text)
    start = Hypothesis(
        consumed=0,
        produced="",
        channel_logp=0.0,
        lm_logp=0.0,
        lm_state=lm.start_context(),
    )
    frontiers: list[dict[str, Hypothesis]] = [{} for _ in range(n + 1)]
    frontiers[0][start.lm_state] = start

    for position in range(n):
        live = sorted(
            frontiers[position].values(), key=lambda h: _rank_key(h, cfg.lm_weight)
        )[: cfg.beam_width]
        if not live:
            continue
        for hyp in live:
            for arc in _capped_arcs(lattice, position, cfg.max_candidates_per_span):
                lm_inc, state = lm.extend(hyp.lm_state, arc.candidate)
                new = Hypothesis(
                    consumed=position + arc.span,
                    produced=hyp.produced + arc.candidate,
                    channel_logp=hyp.channel_logp + arc.weight,
                    lm_logp=hyp.lm_logp + lm_inc,
                    lm_state=state,
                )
                slot = frontiers[new.consumed]
                other = slot.get(state)
                if other is None or _rank_key(new, cfg.lm_weight) < _rank_key(
                    other, cfg.lm_weight
                ):
                    slot[state] = new

    finals = []
    for hyp in frontiers[n].values():
        finals.append(
            Hypothesis(
                consumed=n,
                produced=hyp.produced,
                channel_logp=hyp.channel_logp,
                lm_logp=hyp.lm_logp + lm.end_logp(hyp.lm_state),
                lm_state=hyp.lm_state,
            )
        )
    if not finals:
        raise AssertionError("identity arcs guarantee at least one full path")
    best = min(finals, key=lambda h: _rank_key(h, cfg.lm_weight))
    return normalize_text(best.produced, id=noisy.id)


class Corrector:
    """Binds rules, an inverse table, an LM, and a decoder configuration."""

    def __init__(
        self,
        rules: RewriteRuleSet,
        lm: NGramLanguageModel,
        cfg: DecoderConfig = DecoderConfig(),
        inverse: InverseTable | None = None,
    ):
        self.rules = rules
        self.lm = lm
        self.cfg = cfg
        self.inverse = inverse if inverse is not None else invert_ruleset(rules)

    def correct(self, noisy: Sentence) -> Sentence:
        lattice = build_lattice(noisy, self.inverse)
        return decode(noisy, lattice, self.lm, self.cfg)


_POOL_CORRECTOR: Corrector | None = None


def _pool_init(corrector: Corrector) -> None:
    global _POOL_CORRECTOR
    _POOL_CORRECTOR = corrector


def _pool_correct(sentence: Sentence) -> str:
    assert _POOL_CORRECTOR is not None
    return _POOL_CORRECTOR.correct(sentence).text


def correct_corpus(
    noisy_file: str | Path,
    rules: RewriteRuleSet,
    lm: NGramLanguageModel,
    cfg: DecoderConfig = DecoderConfig(),
    out_file: str | Path | None = None,
    threads: int = 1,
) -> Path:
    """Correct one file line by line into a predictions file.

    ``threads`` caps the number of worker processes; order is preserved
    either way.
    """
    noisy_path = Path(noisy_file)
    out_path = (
        Path(out_file) if out_file is not None else noisy_path.with_suffix(".pred")
    )
    corrector = Corrector(rules=rules, lm=lm, cfg=cfg)
    sentences = read_sentences(noisy_path)

    if threads > 1 and len(sentences) > 1:
        import multiprocessing

        try:
            context = multiprocessing.get_context("fork")
        except ValueError:
            context = None
        if context is not None:
            with context.Pool(
                threads, initializer=_pool_init, initargs=(corrector,)
            ) as pool:
                texts = pool.map(_pool_correct, sentences, chunksize=32)
            corrected = texts
        else:
            corrected = [corrector.correct(s).text for s in sentences]
    else:
        corrected = [corrector.correct(s).text for s in sentences]

    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes("".join(t + "\n" for t in corrected).encode("utf-8"))
    return out_path


def load_external_predictions(
    path: str | Path, reference_count: int
) -> list[Sentence]:
    """Load an externally produced predictions file, checking alignment."""
    predictions = read_sentences(path)
    if len(predictions) != reference_count:
        raise AlignmentError(
            f"{path} holds {len(predictions)} predictions but "
            f"{reference_count} references are expected"
        )
    return predictions
