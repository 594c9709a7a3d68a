"""Exception types shared across the toolkit."""

from __future__ import annotations


class WospellError(Exception):
    """Base class for all toolkit errors."""


class AlignmentError(WospellError):
    """Two line-aligned resources disagree on length."""


class CapacityError(WospellError):
    """A split or allocation request exceeds what the corpus can supply."""


class RuleSchemaError(WospellError):
    """A rule file line does not follow the stage/pattern/replacement schema."""


class RuleCompileError(WospellError):
    """A rule pattern failed to compile; carries the offending rule index."""

    def __init__(self, message: str, rule_index: int | None = None):
        super().__init__(message)
        self.rule_index = rule_index


class InversionError(WospellError):
    """A rewrite rule cannot be inverted into a finite substitution table."""


class TrainingError(WospellError):
    """A model cannot be trained from the given data."""


class ReservedSymbolError(WospellError):
    """Input text contains a symbol reserved by a segmentation scheme."""


class UndefinedMetricError(WospellError):
    """A metric is requested over an empty or degenerate input."""


class PipelineError(WospellError):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r}: {cause}")
        self.stage = stage
        self.cause = cause
