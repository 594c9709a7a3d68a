"""Two-way (or n-way) character n-gram language identifier.

One additive-smoothed character model per label, all sharing one alphabet so
their likelihoods are comparable. Decisions use per-character-normalized
log-likelihood, which keeps short and long sentences on the same scale. Each
model reserves an unseen-symbol bucket since foreign text is the whole point.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .corpus import Sentence
from .errors import TrainingError
from .lm import FILE_VERSION, NGramLanguageModel, train_lm


@dataclass(frozen=True)
class LangIdModel:
    order: int
    smoothing: float
    models: dict[str, NGramLanguageModel]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(self.models))

    def save(self, path: str | Path) -> None:
        doc = {
            "version": FILE_VERSION,
            "order": self.order,
            "smoothing": self.smoothing,
            "labels": {
                label: {
                    "alphabet": sorted(m.alphabet),
                    "counts": {ctx: dict(c) for ctx, c in sorted(m.counts.items())},
                }
                for label, m in sorted(self.models.items())
            },
        }
        Path(path).write_text(
            json.dumps(doc, ensure_ascii=False, sort_keys=True), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "LangIdModel":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc.get("version") != FILE_VERSION:
            raise TrainingError(f"unsupported model file version: {doc.get('version')}")
        models = {
            label: NGramLanguageModel(
                order=doc["order"],
                smoothing=doc["smoothing"],
                alphabet=frozenset(body["alphabet"]),
                counts={ctx: Counter(c) for ctx, c in body["counts"].items()},
                reserve_unseen=True,
            )
            for label, body in doc["labels"].items()
        }
        return cls(order=doc["order"], smoothing=doc["smoothing"], models=models)


def train_langid(
    labeled: list[tuple[Sentence, str]],
    order: int = 3,
    smoothing: float = 0.5,
) -> LangIdModel:
    """Train one smoothed character model per label over a shared alphabet."""
    if order < 1:
        raise TrainingError(f"order must be >= 1, got {order}")
    if smoothing <= 0:
        raise TrainingError(f"smoothing must be positive, got {smoothing}")
    by_label: dict[str, list[Sentence]] = {}
    for sentence, label in labeled:
        by_label.setdefault(label, []).append(sentence)
    if len(by_label) < 2:
        raise TrainingError(
            f"need at least two labels to train an identifier, got {sorted(by_label)}"
        )
    alphabet = {ch for sentence, _ in labeled for ch in sentence.text}
    models = {
        label: train_lm(
            sentences, order=order, k=smoothing, alphabet=alphabet, reserve_unseen=True
        )
        for label, sentences in by_label.items()
    }
    return LangIdModel(order=order, smoothing=smoothing, models=models)


def classify(model: LangIdModel, sentence: Sentence) -> tuple[str | None, dict[str, float]]:
    """Argmax label by length-normalized log-likelihood.

    Empty sentences abstain: the label is None and no scores are reported.
    Ties go to the lexicographically first label.
    """
    text = sentence.text
    if not text:
        return None, {}
    scores = {
        label: m.score(sentence) / (len(text) + 1) for label, m in model.models.items()
    }
    # max() keeps the first of equal keys; iterating labels in sorted order
    # therefore breaks ties lexicographically.
    best = max(sorted(scores), key=lambda label: scores[label])
    return best, scores


def filter_corpus(
    model: LangIdModel, sentences: list[Sentence], keep: str
) -> list[Sentence]:
    """Keep exactly the sentences classified as ``keep``, in order."""
    return [s for s in sentences if classify(model, s)[0] == keep]
