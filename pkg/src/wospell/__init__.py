"""Wolof spelling toolkit.

Builds synthetic noisy/clean parallel corpora with an ordered rewrite-rule
engine, prepares them under word/subword/character segmentation, corrects
noisy text through rule-inversion lattices scored by a character n-gram
language model, and scores predictions (from this toolkit or from external
models) with sentence-level accuracy.
"""

from .corpus import (
    ParallelCorpus,
    Sentence,
    SplitSpec,
    load_parallel,
    normalize_text,
    stratified_split,
    write_corpus,
)
from .decoder import (
    Corrector,
    DecoderConfig,
    correct_corpus,
    decode,
    load_external_predictions,
)
from .errors import WospellError
from .evaluate import EvalReport, char_error_rate, render_report, sentence_accuracy
from .langid import LangIdModel, classify, filter_corpus, train_langid
from .lattice import CandidateLattice, InverseTable, build_lattice, invert_ruleset
from .lm import NGramLanguageModel, perplexity, score, train_lm
from .rules import (
    RewriteRule,
    RewriteRuleSet,
    apply_rules,
    builtin_ruleset,
    compile_ruleset,
    noise_corpus,
)
from .segment import SegmentationScheme, Vocabulary, build_vocab, train_subword

__version__ = "0.1.0"
