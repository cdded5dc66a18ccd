"""Fact-level evaluation toolkit for Open Information Extraction."""

from .model import (
    Extraction,
    ModelError,
    Sentence,
    Token,
    TokenSeq,
    Triple,
    UnknownSentenceError,
    normalize,
    seq_equal,
)
from .gold import (
    DEFAULT_EXPANSION_CAP,
    ENV_EXPANSION_CAP,
    AlternationGroup,
    ExpansionCapError,
    FactSynset,
    GoldCorpus,
    GoldParseError,
    LiteralToken,
    OptionalGroup,
    SlotPattern,
    TriplePattern,
    ValidationIssue,
    expand,
    expand_corpus,
    minimal_forms,
    parse_gold,
    parse_slot,
    serialize_gold,
    serialize_slot,
    validate_corpus,
)
from .ingest import (
    ExtractionParseError,
    RawExtraction,
    TaggedParseError,
    TaggedSentence,
    collapse_nary,
    filter_implicit,
    naive_extract,
    read_extractions,
    read_tagged,
    to_extractions,
)
from .scoring import (
    MatchMatrix,
    MatchedExtraction,
    ScoreReport,
    ScoringError,
    SentenceScore,
    TokenOverlapScore,
    dedup_extractions,
    iaa,
    match,
    prf,
    score,
    token_overlap,
    token_overlap_assign,
    token_overlap_pair,
)
from .facets import FACETS, FacetGold, derive, derive_C, derive_E, derive_M, score_facet
from .profiling import (
    BucketReport,
    FeatureBuckets,
    ProfilingError,
    SlotSignature,
    bucketize_errors,
    bucketize_sentences,
    closest_gold,
)

__version__ = "0.1.0"

__all__ = [
    "AlternationGroup",
    "BucketReport",
    "DEFAULT_EXPANSION_CAP",
    "ENV_EXPANSION_CAP",
    "ExpansionCapError",
    "Extraction",
    "ExtractionParseError",
    "FACETS",
    "FacetGold",
    "FactSynset",
    "FeatureBuckets",
    "GoldCorpus",
    "GoldParseError",
    "LiteralToken",
    "MatchMatrix",
    "MatchedExtraction",
    "ModelError",
    "OptionalGroup",
    "ProfilingError",
    "RawExtraction",
    "ScoreReport",
    "ScoringError",
    "Sentence",
    "SentenceScore",
    "SlotPattern",
    "SlotSignature",
    "TaggedParseError",
    "TaggedSentence",
    "Token",
    "TokenOverlapScore",
    "TokenSeq",
    "Triple",
    "TriplePattern",
    "UnknownSentenceError",
    "ValidationIssue",
    "bucketize_errors",
    "bucketize_sentences",
    "closest_gold",
    "collapse_nary",
    "dedup_extractions",
    "derive",
    "derive_C",
    "derive_E",
    "derive_M",
    "expand",
    "expand_corpus",
    "filter_implicit",
    "iaa",
    "match",
    "minimal_forms",
    "naive_extract",
    "normalize",
    "parse_gold",
    "parse_slot",
    "serialize_slot",
    "prf",
    "read_extractions",
    "read_tagged",
    "score",
    "score_facet",
    "seq_equal",
    "serialize_gold",
    "token_overlap",
    "token_overlap_assign",
    "token_overlap_pair",
    "to_extractions",
    "validate_corpus",
]
