"""Personality-styled NLG for the restaurant domain.

Deterministic generation of stylistically varied utterances from
meaning representations, corpus synthesis at scale, and an evaluation
suite for semantic fidelity and stylistic variation.
"""
from .mr import (
    ATTRIBUTES,
    MeaningRepresentation,
    MRError,
    MRParseError,
    delexicalize,
    format_mr,
    load_mrs,
    parse_mr,
    relexicalize,
)
from .lexicon import Lexicon, LexiconError, ProtoSentence
from .planner import AggregationOp, SentencePlan, aggregate, apply_op
from .pragmatics import MarkerPlacement, MarkerSpec, Slot, insert_markers, marker_registry
from .personality import (
    BASELINE_TRAIT,
    REGISTRY_VERSION,
    TRAITS,
    StyleVector,
    TraitProfile,
    baseline_profile,
    builtin_profiles,
    parameter_registry,
    resolve_profile,
    sample_weights,
    style_vector_from_trace,
)
from .realization import Realization, generate, linearize
from .corpus import (
    CorpusRecord,
    CorpusSpec,
    SplitSpec,
    mr_length_histogram,
    read_corpus,
    sample_mrs,
    synthesize,
)
from .metrics import (
    ErrorReport,
    StyleProfile,
    bleu4,
    detect_errors,
    entropy,
    error_ratios,
    pearson,
    report,
    rouge_l,
    style_profile,
    tokenize,
)

__version__ = "0.1.0"
