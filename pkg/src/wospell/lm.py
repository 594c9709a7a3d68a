"""Additive-smoothed character n-gram language model.

Sentences are padded with ``order - 1`` start sentinels and one end
sentinel; both sentinels belong to the alphabet, so every stored context
carries a distribution over the full alphabet that sums to one. With
``reserve_unseen`` the denominator reserves one extra slot so that the
alphabet plus a single unseen bucket sums to one instead (used by the
language identifier, where sentences routinely contain foreign characters).
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Sentence
from .errors import TrainingError, UndefinedMetricError

#: Sentence-boundary sentinels; control characters never appear in corpora.
BOS = "\x02"
EOS = "\x03"

FILE_VERSION = 1


@dataclass(frozen=True)
class NGramLanguageModel:
    order: int
    smoothing: float
    alphabet: frozenset[str]
    counts: dict[str, Counter]
    totals: dict[str, int] = field(default_factory=dict)
    reserve_unseen: bool = False

    def __post_init__(self) -> None:
        if not self.totals:
            object.__setattr__(
                self,
                "totals",
                {ctx: sum(c.values()) for ctx, c in self.counts.items()},
            )

    @classmethod
    def uniform(
        cls, alphabet: set[str], order: int = 1, smoothing: float = 1.0
    ) -> "NGramLanguageModel":
        """A model with no observations: every conditional is 1/|alphabet|."""
        if smoothing <= 0:
            raise TrainingError("a uniform model needs positive smoothing")
        full = frozenset(alphabet) | {BOS, EOS}
        return cls(order=order, smoothing=smoothing, alphabet=full, counts={})

    @property
    def _slots(self) -> int:
        return len(self.alphabet) + (1 if self.reserve_unseen else 0)

    def prob(self, context: str, symbol: str) -> float:
        """Smoothed P(symbol | context); unseen symbols share the smoothing mass."""
        counter = self.counts.get(context)
        seen = counter.get(symbol, 0) if counter else 0
        total = self.totals.get(context, 0)
        denom = total + self.smoothing * self._slots
        if denom == 0:
            return 0.0
        return (seen + self.smoothing) / denom

    def logprob(self, context: str, symbol: str) -> float:
        p = self.prob(context, symbol)
        return math.log(p) if p > 0 else -math.inf

    def start_context(self) -> str:
        return BOS * (self.order - 1)

    def _shift(self, context: str, symbol: str) -> str:
        if self.order == 1:
            return ""
        return (context + symbol)[-(self.order - 1) :]

    def extend(self, context: str, text: str) -> tuple[float, str]:
        """Score ``text`` after ``context``; returns (log-prob sum, new context)."""
        logp = 0.0
        for ch in text:
            logp += self.logprob(context, ch)
            context = self._shift(context, ch)
        return logp, context

    def end_logp(self, context: str) -> float:
        return self.logprob(context, EOS)

    def score(self, sentence: Sentence | str) -> float:
        """Log-probability of the full padded sentence."""
        text = sentence.text if isinstance(sentence, Sentence) else sentence
        logp, context = self.extend(self.start_context(), text)
        return logp + self.end_logp(context)

    def save(self, path: str | Path) -> None:
        doc = {
            "version": FILE_VERSION,
            "order": self.order,
            "smoothing": self.smoothing,
            "reserve_unseen": self.reserve_unseen,
            "alphabet": sorted(self.alphabet),
            "counts": {ctx: dict(c) for ctx, c in sorted(self.counts.items())},
        }
        Path(path).write_text(
            json.dumps(doc, ensure_ascii=False, sort_keys=True), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "NGramLanguageModel":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("version") != FILE_VERSION:
            raise TrainingError(f"unsupported model file version: {doc.get('version')}")
        return cls(
            order=doc["order"],
            smoothing=doc["smoothing"],
            reserve_unseen=doc["reserve_unseen"],
            alphabet=frozenset(doc["alphabet"]),
            counts={ctx: Counter(c) for ctx, c in doc["counts"].items()},
        )


def train_lm(
    sentences: list[Sentence],
    order: int = 5,
    k: float = 0.1,
    alphabet: set[str] | None = None,
    reserve_unseen: bool = False,
) -> NGramLanguageModel:
    """Count padded character windows and build additive-k conditionals."""
    if order < 1:
        raise TrainingError(f"order must be >= 1, got {order}")
    if k < 0:
        raise TrainingError(f"smoothing must be non-negative, got {k}")
    if not sentences:
        raise TrainingError("cannot train a language model on an empty corpus")

    chars: set[str] = set()
    counts: dict[str, Counter] = {}
    for sentence in sentences:
        text = sentence.text
        chars.update(text)
        padded = BOS * (order - 1) + text + EOS
        for i in range(len(text) + 1):
            context = padded[i : i + order - 1]
            symbol = padded[i + order - 1]
            bucket = counts.get(context)
            if bucket is None:
                bucket = counts[context] = Counter()
            bucket[symbol] += 1

    full_alphabet = (set(alphabet) if alphabet is not None else chars) | {BOS, EOS}
    return NGramLanguageModel(
        order=order,
        smoothing=k,
        alphabet=frozenset(full_alphabet),
        counts=counts,
        reserve_unseen=reserve_unseen,
    )


def score(model: NGramLanguageModel, sentence: Sentence | str) -> float:
    return model.score(sentence)


def perplexity(model: NGramLanguageModel, sentences: list[Sentence]) -> float:
    """exp(-total log-prob / total predicted symbols) over the given set."""
    if not sentences:
        raise UndefinedMetricError("perplexity over an empty set is undefined")
    total_logp = 0.0
    total_symbols = 0
    for sentence in sentences:
        total_logp += model.score(sentence)
        total_symbols += len(sentence.text) + 1  # the end sentinel is predicted too
    return math.exp(-total_logp / total_symbols)
