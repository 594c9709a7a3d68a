"""Sentence-level accuracy, character error rate, and result reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .corpus import Sentence, normalize_text
from .errors import AlignmentError, UndefinedMetricError

FILE_VERSION = 1


def _check_lengths(predictions: list, references: list) -> None:
    if len(predictions) != len(references):
        raise AlignmentError(
            f"{len(predictions)} predictions vs {len(references)} references"
        )


def _text(s: Sentence | str) -> str:
    raw = s.text if isinstance(s, Sentence) else s
    return normalize_text(raw).text


def sentence_accuracy(
    predictions: list[Sentence | str], references: list[Sentence | str]
) -> float:
    """Percentage of predictions exactly matching their reference.

    Both sides are normalized first so that whitespace and encoding noise
    cannot move the metric.
    """
    _check_lengths(predictions, references)
    if not references:
        raise UndefinedMetricError("accuracy over zero pairs is undefined")
    matches = sum(1 for p, r in zip(predictions, references) if _text(p) == _text(r))
    return 100.0 * matches / len(references)


def levenshtein(a: str, b: str) -> int:
    """Character-level edit distance (insert, delete, substitute)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,  # delete from a
                    current[j - 1] + 1,  # insert into a
                    previous[j - 1] + (ca != cb),  # substitute
                )
            )
        previous = current
    return previous[-1]


def char_error_rate(
    predictions: list[Sentence | str], references: list[Sentence | str]
) -> float:
    """Total edit distance divided by total reference characters.

    Pairs where both sides are empty contribute nothing. A nonzero distance
    against zero reference characters has no defined rate.
    """
    _check_lengths(predictions, references)
    if not references:
        raise UndefinedMetricError("character error rate over zero pairs is undefined")
    total_distance = 0
    total_chars = 0
    for p, r in zip(predictions, references):
        pt, rt = _text(p), _text(r)
        if not pt and not rt:
            continue
        total_distance += levenshtein(pt, rt)
        total_chars += len(rt)
    if total_chars == 0:
        if total_distance == 0:
            return 0.0
        raise UndefinedMetricError(
            f"distance {total_distance} against empty references"
        )
    return total_distance / total_chars


@dataclass(frozen=True)
class EvalReport:
    """Accuracy rows keyed by (model, scheme) plus run metadata."""

    rows: tuple[tuple[str, str, float], ...]
    metadata: dict = field(default_factory=dict)
    diagnostics: tuple[dict, ...] = ()

    def __post_init__(self) -> None:
        for _, _, accuracy in self.rows:
            if not 0.0 <= accuracy <= 100.0:
                raise ValueError(f"accuracy {accuracy} is outside [0, 100]")

    def to_json(self) -> str:
        doc = {
            "version": FILE_VERSION,
            "metadata": self.metadata,
            "rows": [
                {"model": m, "scheme": s, "accuracy_percent": a}
                for m, s, a in self.rows
            ],
        }
        if self.diagnostics:
            doc["diagnostics"] = list(self.diagnostics)
        return json.dumps(doc, ensure_ascii=False, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        doc = json.loads(text)
        rows = tuple(
            (r["model"], r["scheme"], r["accuracy_percent"]) for r in doc["rows"]
        )
        return cls(
            rows=rows,
            metadata=doc.get("metadata", {}),
            diagnostics=tuple(doc.get("diagnostics", ())),
        )


def render_report(
    rows: list[tuple[str, str, float]], format: str = "table"
) -> str:
    """Serialize (model, scheme, accuracy) rows as a text grid or JSON."""
    if not rows:
        raise UndefinedMetricError("cannot render an empty report")
    if format == "json":
        return EvalReport(rows=tuple(rows)).to_json()
    if format != "table":
        raise ValueError(f"unknown report format {format!r}")

    headers = ("Model", "Scheme", "Accuracy (%)")
    cells = [(m, s, f"{a:.2f}") for m, s, a in rows]
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in cells)) for i in range(3)
    ]
    rule = "+".join("-" * (w + 2) for w in widths)
    lines = [
        " | ".join(h.ljust(w) for h, w in zip(headers, widths)),
        rule,
    ]
    previous_model = None
    for model, scheme, accuracy in cells:
        shown = model if model != previous_model else ""
        lines.append(
            " | ".join(
                v.ljust(w) for v, w in zip((shown, scheme, accuracy), widths)
            )
        )
        previous_model = model
    return "\n".join(lines) + "\n"
