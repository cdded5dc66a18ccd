"""Fact-level exact scoring, token-overlap scoring, and agreement.

Fact-level counts are asymmetric by design: true positives and false
negatives are counted over gold synsets (a synset is covered when any
extraction exactly matches any of its expanded triples), while false
positives are counted over deduplicated extractions that match nothing.
An extraction that covers triples in several synsets counts every one of
those synsets as covered; the report tracks how often that happened.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .gold import DEFAULT_EXPANSION_CAP, GoldCorpus, expand_corpus
from .model import Extraction, Triple, UnknownSentenceError


class ScoringError(ValueError):
    pass


def prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Precision, recall, F1 from counts; empty denominators give 0.0."""
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


@dataclass(frozen=True)
class MatchedExtraction:
    """One deduplicated extraction with its gold hits.

    Each hit is (synset_id, matched gold value); the value is the triple
    the extraction matched (facet views may match other shapes, e.g. a
    whole-utterance token sequence).
    """

    extraction: Extraction
    hits: tuple[tuple[str, object], ...]

    @property
    def synset_ids(self) -> frozenset[str]:
        return frozenset(sid for sid, _ in self.hits)

    @property
    def matched(self) -> bool:
        return bool(self.hits)


@dataclass
class MatchMatrix:
    """Per-sentence match results for a set of extractions."""

    facet: str
    by_sentence: dict[str, list[MatchedExtraction]]


def dedup_extractions(extractions: Iterable[Extraction]) -> list[Extraction]:
    """Drop repeats of (sentence id, normalized triple), keeping first seen."""
    seen: set[tuple] = set()
    out: list[Extraction] = []
    for e in extractions:
        if e.key in seen:
            continue
        seen.add(e.key)
        out.append(e)
    return out


def match_sets(
    extractions: Sequence[Extraction],
    gold_sets: Mapping[str, frozenset],
    synset_sentence: Mapping[str, str],
    sentence_ids: Iterable[str],
    key_fn: Callable[[Extraction], Hashable],
    facet: str = "default",
) -> MatchMatrix:
    """Generic matcher over per-synset key sets.

    ``gold_sets`` maps synset id to the set of acceptable keys and
    ``key_fn`` maps an extraction to its comparable key. Extractions are
    deduplicated by (sentence id, normalized triple) first.
    """
    by_sentence: dict[str, list[MatchedExtraction]] = {sid: [] for sid in sentence_ids}
    synsets_of: dict[str, list[str]] = {sid: [] for sid in by_sentence}
    for syn_id, sent_id in synset_sentence.items():
        synsets_of[sent_id].append(syn_id)
    for e in dedup_extractions(extractions):
        if e.sentence_id not in by_sentence:
            raise UnknownSentenceError(
                f"extraction references unknown sentence {e.sentence_id!r}"
            )
        key = key_fn(e)
        hits = tuple(
            (syn_id, key)
            for syn_id in synsets_of[e.sentence_id]
            if key in gold_sets[syn_id]
        )
        by_sentence[e.sentence_id].append(MatchedExtraction(e, hits))
    return MatchMatrix(facet=facet, by_sentence=by_sentence)


def match(
    extractions: Sequence[Extraction],
    gold: GoldCorpus,
    *,
    expanded: Mapping[str, set[Triple]] | None = None,
    cap: int = DEFAULT_EXPANSION_CAP,
) -> MatchMatrix:
    """Exact-match extractions against the expanded gold corpus."""
    if expanded is None:
        expanded = expand_corpus(gold, cap)
    gold_sets = {sid: frozenset(triples) for sid, triples in expanded.items()}
    synset_sentence = {syn.id: syn.sentence_id for syn in gold.synsets}
    return match_sets(
        extractions,
        gold_sets,
        synset_sentence,
        gold.sentences.keys(),
        key_fn=lambda e: e.triple,
    )


@dataclass(frozen=True)
class SentenceScore:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float


@dataclass
class ScoreReport:
    facet: str
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    per_sentence: dict[str, SentenceScore] = field(default_factory=dict)
    multi_cover_extractions: int = 0

    def to_dict(self) -> dict:
        return {
            "facet": self.facet,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "multi_cover_extractions": self.multi_cover_extractions,
            "per_sentence": {
                sid: {
                    "tp": s.tp,
                    "fp": s.fp,
                    "fn": s.fn,
                    "precision": s.precision,
                    "recall": s.recall,
                    "f1": s.f1,
                }
                for sid, s in self.per_sentence.items()
            },
        }


def score_sets(
    m: MatchMatrix,
    synset_sentence: Mapping[str, str],
    facet: str | None = None,
) -> ScoreReport:
    """Aggregate a match matrix into counts and P/R/F1, per sentence and total."""
    synsets_of: dict[str, list[str]] = {sid: [] for sid in m.by_sentence}
    for syn_id, sent_id in synset_sentence.items():
        if sent_id not in synsets_of:
            raise ScoringError(
                f"synset {syn_id!r} references sentence {sent_id!r} "
                f"absent from the match matrix"
            )
        synsets_of[sent_id].append(syn_id)

    per_sentence: dict[str, SentenceScore] = {}
    total_tp = total_fp = total_fn = 0
    multi = 0
    for sent_id, rows in m.by_sentence.items():
        covered: set[str] = set()
        fp = 0
        for row in rows:
            ids = row.synset_ids
            if not ids:
                fp += 1
            else:
                covered |= ids
                if len(ids) > 1:
                    multi += 1
        tp = len(covered)
        fn = len(synsets_of[sent_id]) - tp
        p, r, f1 = prf(tp, fp, fn)
        per_sentence[sent_id] = SentenceScore(tp, fp, fn, p, r, f1)
        total_tp += tp
        total_fp += fp
        total_fn += fn
    p, r, f1 = prf(total_tp, total_fp, total_fn)
    return ScoreReport(
        facet=facet if facet is not None else m.facet,
        tp=total_tp,
        fp=total_fp,
        fn=total_fn,
        precision=p,
        recall=r,
        f1=f1,
        per_sentence=per_sentence,
        multi_cover_extractions=multi,
    )


def score(m: MatchMatrix, gold: GoldCorpus) -> ScoreReport:
    return score_sets(m, {syn.id: syn.sentence_id for syn in gold.synsets})


@dataclass(frozen=True)
class TokenOverlapScore:
    precision: float
    recall: float
    f1: float


def token_overlap_pair(e: Triple, g: Triple) -> TokenOverlapScore:
    """Slot-wise multiset token overlap between one extraction and one gold.

    Matches are counted per slot (subject against subject, and so on) on
    case-folded tokens; precision divides by the extraction's total token
    count, recall by the gold's.
    """
    matched = 0
    e_total = 0
    g_total = 0
    for es, gs in zip(e.slots, g.slots):
        inter = Counter(es.key) & Counter(gs.key)
        matched += sum(inter.values())
        e_total += len(es)
        g_total += len(gs)
    p = matched / e_total if e_total else 0.0
    r = matched / g_total if g_total else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return TokenOverlapScore(p, r, f1)


def token_overlap(e: Extraction, gold_triples: Sequence[Triple]) -> TokenOverlapScore:
    """Best token-overlap score of one extraction over candidate gold triples.

    Ties on F1 go to the earlier gold triple in input order.
    """
    if not gold_triples:
        raise ScoringError("token_overlap needs at least one gold triple")
    best = None
    for g in gold_triples:
        s = token_overlap_pair(e.triple, g)
        if best is None or s.f1 > best.f1:
            best = s
    return best


def token_overlap_assign(
    extractions: Sequence[Triple], gold_triples: Sequence[Triple]
) -> tuple[list[TokenOverlapScore], list[float]]:
    """Greedy one-to-one assignment between extractions and gold triples.

    Pairs are taken in order of descending F1, ties broken by extraction
    then gold input order. Returns per-extraction scores (zero when left
    unassigned) and per-gold-triple recalls (zero when left uncovered).
    """
    pairs = []
    for i, e in enumerate(extractions):
        for j, g in enumerate(gold_triples):
            s = token_overlap_pair(e, g)
            pairs.append((-s.f1, i, j, s))
    pairs.sort(key=lambda t: t[:3])
    e_score: list[TokenOverlapScore | None] = [None] * len(extractions)
    g_recall: list[float | None] = [None] * len(gold_triples)
    for _, i, j, s in pairs:
        if e_score[i] is None and g_recall[j] is None:
            e_score[i] = s
            g_recall[j] = s.recall
    zero = TokenOverlapScore(0.0, 0.0, 0.0)
    return (
        [s if s is not None else zero for s in e_score],
        [r if r is not None else 0.0 for r in g_recall],
    )


def iaa(a: GoldCorpus, b: GoldCorpus, cap: int = DEFAULT_EXPANSION_CAP) -> float:
    """Inter-annotator agreement: mean of the two directional fact recalls.

    A synset of one annotator counts as covered when its expansion shares
    at least one triple with the other annotator's expanded triples for
    the same sentence. A direction with no synsets contributes 1.0.
    """
    if set(a.sentences) != set(b.sentences):
        only_a = sorted(set(a.sentences) - set(b.sentences))
        only_b = sorted(set(b.sentences) - set(a.sentences))
        raise ScoringError(
            f"annotations cover different sentences "
            f"(only in first: {only_a}; only in second: {only_b})"
        )

    def direction(gold: GoldCorpus, other: GoldCorpus) -> float:
        if not gold.synsets:
            return 1.0
        gold_exp = expand_corpus(gold, cap)
        other_exp = expand_corpus(other, cap)
        other_by_sentence: dict[str, set[Triple]] = {}
        for syn in other.synsets:
            other_by_sentence.setdefault(syn.sentence_id, set()).update(
                other_exp[syn.id]
            )
        covered = sum(
            1
            for syn in gold.synsets
            if gold_exp[syn.id] & other_by_sentence.get(syn.sentence_id, set())
        )
        return covered / len(gold.synsets)

    return (direction(a, b) + direction(b, a)) / 2.0
