"""Facet views of a gold corpus: stricter or laxer match targets.

A facet rewrites what each synset accepts, without touching the synset
universe, so recall denominators stay comparable across facets:

    default  every expanded triple, slot-by-slot comparison
    E        only patterns whose subject and object are clean standalone
             concepts; a synset left with no such pattern stays in the
             universe and can never be covered
    C        slot boundaries ignored: each expanded triple is flattened
             into one utterance token sequence, and extractions are
             flattened the same way before comparison
    M        only the minimal form of each pattern (all optional groups
             absent; alternations still vary)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .gold import DEFAULT_EXPANSION_CAP, GoldCorpus, expand, minimal_forms
from .model import Extraction, TokenSeq, Triple
from . import scoring

FACETS = ("default", "E", "C", "M")


@dataclass
class FacetGold:
    """Per-synset acceptable match keys under one facet."""

    facet: str
    by_synset: dict[str, frozenset]
    synset_sentence: dict[str, str]
    sentence_ids: tuple[str, ...]


def _utterance(triple: Triple) -> TokenSeq:
    return triple.subject + triple.predicate + triple.object


def extraction_key(e: Extraction, facet: str) -> Hashable:
    """The comparable view of an extraction under a facet."""
    if facet == "C":
        return _utterance(e.triple)
    return e.triple


def derive(gold: GoldCorpus, facet: str, cap: int = DEFAULT_EXPANSION_CAP) -> FacetGold:
    """Build the facet view of a corpus. ``facet`` is one of FACETS."""
    if facet not in FACETS:
        raise ValueError(f"unknown facet {facet!r}, expected one of {FACETS}")
    by_synset: dict[str, frozenset] = {}
    for syn in gold.synsets:
        keys: set = set()
        for i, pattern in enumerate(syn.patterns):
            context = f"synset {syn.id}, pattern {i + 1}"
            if facet == "E":
                if pattern.entity_clean:
                    keys |= expand(pattern, cap, context=context)
            elif facet == "M":
                keys |= minimal_forms(pattern, cap)
            elif facet == "C":
                keys |= {_utterance(t) for t in expand(pattern, cap, context=context)}
            else:
                keys |= expand(pattern, cap, context=context)
        by_synset[syn.id] = frozenset(keys)
    return FacetGold(
        facet=facet,
        by_synset=by_synset,
        synset_sentence={syn.id: syn.sentence_id for syn in gold.synsets},
        sentence_ids=tuple(gold.sentences),
    )


def derive_E(gold: GoldCorpus, cap: int = DEFAULT_EXPANSION_CAP) -> FacetGold:
    return derive(gold, "E", cap)


def derive_C(gold: GoldCorpus, cap: int = DEFAULT_EXPANSION_CAP) -> FacetGold:
    return derive(gold, "C", cap)


def derive_M(gold: GoldCorpus, cap: int = DEFAULT_EXPANSION_CAP) -> FacetGold:
    return derive(gold, "M", cap)


def match_facet(
    extractions: Sequence[Extraction], facet_gold: FacetGold
) -> scoring.MatchMatrix:
    return scoring.match_sets(
        extractions,
        facet_gold.by_synset,
        facet_gold.synset_sentence,
        facet_gold.sentence_ids,
        key_fn=lambda e: extraction_key(e, facet_gold.facet),
        facet=facet_gold.facet,
    )


def score_facet(
    extractions: Sequence[Extraction],
    gold: GoldCorpus,
    facet: str,
    cap: int = DEFAULT_EXPANSION_CAP,
) -> scoring.ScoreReport:
    """Score extractions against one facet view of the corpus."""
    fg = derive(gold, facet, cap)
    m = match_facet(extractions, fg)
    return scoring.score_sets(m, fg.synset_sentence)
