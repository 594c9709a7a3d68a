"""Seq2seq spelling-correction trainer over wospell tokenized corpora."""

from .data import SchemaError, Scheme, Vocab
from .predicting import predict
from .training import (
    TrainingConfig,
    TrainingFailure,
    export_run_manifest,
    train_model,
)

__version__ = "0.1.0"
