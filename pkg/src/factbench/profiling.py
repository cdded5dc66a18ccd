"""Error profiling: which slot went wrong, and where the hard sentences are.

Incorrect extractions (no exact match in any synset of their sentence) are
bucketed by the per-slot agreement with their *closest* gold triple, the
one matching the largest number of slots. When several gold triples tie
with distinct agreement signatures, every tied signature's bucket is
incremented, so bucket counts can add up to more than the number of
incorrect extractions.

Sentence bucketization splits the corpus by a surface feature (length,
coordination count, preposition-structure count) and scores each bucket
separately; per-bucket counts add up to the corpus totals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .gold import DEFAULT_EXPANSION_CAP, GoldCorpus, expand_corpus
from .ingest import TaggedSentence
from .model import Extraction, Triple
from . import scoring


class ProfilingError(ValueError):
    pass


class SlotSignature(NamedTuple):
    subject_ok: bool
    predicate_ok: bool
    object_ok: bool

    @property
    def matched(self) -> int:
        return int(self.subject_ok) + int(self.predicate_ok) + int(self.object_ok)

    def label(self) -> str:
        return "".join(
            str(int(v)) for v in (self.subject_ok, self.predicate_ok, self.object_ok)
        )


CORRECT_SIGNATURE = SlotSignature(True, True, True)

# the 7 possible signatures of an incorrect extraction, in a fixed order
ERROR_SIGNATURES: tuple[SlotSignature, ...] = tuple(
    SlotSignature(s, p, o)
    for s in (False, True)
    for p in (False, True)
    for o in (False, True)
    if (s, p, o) != (True, True, True)
)


def closest_gold(e: Extraction, gold_triples: Iterable[Triple]) -> frozenset[SlotSignature]:
    """Agreement signatures of the gold triples matching the most slots.

    Several triples can tie; only distinct signatures are returned.
    """
    best: set[SlotSignature] = set()
    best_matched = -1
    for g in gold_triples:
        sig = SlotSignature(
            e.triple.subject == g.subject,
            e.triple.predicate == g.predicate,
            e.triple.object == g.object,
        )
        if sig.matched > best_matched:
            best = {sig}
            best_matched = sig.matched
        elif sig.matched == best_matched:
            best.add(sig)
    if not best:
        raise ProfilingError(
            f"no gold triples for sentence {e.sentence_id!r} to compare against"
        )
    return frozenset(best)


@dataclass
class BucketReport:
    """Error-signature counts over incorrect extractions.

    ``slot_error_fractions`` gives, per slot, the fraction of incorrect
    extractions for which some closest gold disagrees on that slot; all
    zero (with ``no_errors`` set) when nothing was incorrect.
    """

    counts: dict[SlotSignature, int]
    incorrect: int
    slot_error_fractions: tuple[float, float, float]
    no_errors: bool

    def to_dict(self) -> dict:
        return {
            "counts": {sig.label(): n for sig, n in self.counts.items()},
            "incorrect": self.incorrect,
            "slot_error_fractions": {
                "subject": self.slot_error_fractions[0],
                "predicate": self.slot_error_fractions[1],
                "object": self.slot_error_fractions[2],
            },
            "no_errors": self.no_errors,
        }


def bucketize_errors(
    extractions: Sequence[Extraction],
    gold: GoldCorpus,
    *,
    expanded: Mapping[str, set[Triple]] | None = None,
    cap: int = DEFAULT_EXPANSION_CAP,
) -> BucketReport:
    """Bucket incorrect extractions by closest-gold slot agreement.

    Extractions are deduplicated first. An extraction on a sentence with
    no gold triples at all counts as incorrect with the all-wrong
    signature.
    """
    if expanded is None:
        expanded = expand_corpus(gold, cap)
    by_sentence: dict[str, set[Triple]] = {sid: set() for sid in gold.sentences}
    for syn in gold.synsets:
        by_sentence[syn.sentence_id] |= expanded[syn.id]

    counts: dict[SlotSignature, int] = {sig: 0 for sig in ERROR_SIGNATURES}
    incorrect = 0
    slot_err = [0, 0, 0]
    for e in scoring.dedup_extractions(extractions):
        if e.sentence_id not in by_sentence:
            raise ProfilingError(
                f"extraction references unknown sentence {e.sentence_id!r}"
            )
        triples = by_sentence[e.sentence_id]
        if e.triple in triples:
            continue
        incorrect += 1
        if triples:
            sigs = closest_gold(e, triples)
        else:
            sigs = frozenset({SlotSignature(False, False, False)})
        for sig in sigs:
            counts[sig] += 1
        wrong = [
            any(not sig.subject_ok for sig in sigs),
            any(not sig.predicate_ok for sig in sigs),
            any(not sig.object_ok for sig in sigs),
        ]
        for i, w in enumerate(wrong):
            if w:
                slot_err[i] += 1

    if incorrect:
        fractions = tuple(n / incorrect for n in slot_err)
    else:
        fractions = (0.0, 0.0, 0.0)
    return BucketReport(
        counts=counts,
        incorrect=incorrect,
        slot_error_fractions=fractions,  # type: ignore[arg-type]
        no_errors=incorrect == 0,
    )


LENGTH_BOUNDARIES = (20, 30)


def _length_label(n: int, bounds: tuple[int, int] = LENGTH_BOUNDARIES) -> str:
    lo, hi = bounds
    if n <= lo:
        return f"<={lo}"
    if n <= hi:
        return f"{lo + 1}-{hi}"
    return f">{hi}"


def _count_label(n: int, bounds: tuple[int, int]) -> str:
    lo, hi = bounds
    if n <= lo:
        return f"0-{lo}" if lo > 0 else "0"
    if n <= hi:
        return f"{lo + 1}-{hi}"
    return f">={hi + 1}"


SENTENCE_SCHEMES = ("length", "conj", "case")


@dataclass
class FeatureBuckets:
    """A partition of the corpus sentences plus a score report per part."""

    scheme: str
    labels: tuple[str, ...]
    sentences: dict[str, tuple[str, ...]]
    reports: dict[str, scoring.ScoreReport]

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "labels": list(self.labels),
            "sentences": {k: list(v) for k, v in self.sentences.items()},
            "reports": {k: r.to_dict() for k, r in self.reports.items()},
        }


def bucketize_sentences(
    tagged: Sequence[TaggedSentence],
    scheme: str,
    gold: GoldCorpus,
    extractions: Sequence[Extraction],
    *,
    case_boundaries: tuple[int, int] = (1, 3),
    cap: int = DEFAULT_EXPANSION_CAP,
) -> FeatureBuckets:
    """Partition gold sentences by a feature of the tagged input and score each part.

    Schemes: ``length`` buckets by token count (<=20 / 21-30 / >30),
    ``conj`` by the number of coordinating ``conj`` relations (0 / >=1),
    ``case`` by the number of ``case`` relations with configurable
    boundaries (defaults give 0-1 / 2-3 / >=4). Every gold sentence must
    appear in ``tagged``; ``conj`` and ``case`` need dependency relations.
    """
    if scheme not in SENTENCE_SCHEMES:
        raise ProfilingError(
            f"unknown scheme {scheme!r}, expected one of {SENTENCE_SCHEMES}"
        )
    tagged_by_id = {t.sentence.id: t for t in tagged}
    missing = [sid for sid in gold.sentences if sid not in tagged_by_id]
    if missing:
        raise ProfilingError(
            f"tagged input is missing gold sentences: {', '.join(missing)}"
        )

    if scheme == "length":
        labels = (
            _length_label(0),
            _length_label(LENGTH_BOUNDARIES[0] + 1),
            _length_label(LENGTH_BOUNDARIES[1] + 1),
        )
    elif scheme == "conj":
        labels = ("0", ">=1")
    else:
        lo, hi = case_boundaries
        if not 0 <= lo < hi:
            raise ProfilingError(
                f"case boundaries must satisfy 0 <= low < high, got {case_boundaries}"
            )
        labels = (
            _count_label(0, case_boundaries),
            _count_label(lo + 1, case_boundaries),
            _count_label(hi + 1, case_boundaries),
        )

    def bucket_of(sid: str) -> str:
        t = tagged_by_id[sid]
        if scheme == "length":
            return _length_label(len(t.sentence.tokens))
        if t.deprels is None:
            raise ProfilingError(
                f"scheme {scheme!r} needs dependency relations, sentence "
                f"{sid!r} has none"
            )
        n = sum(1 for r in t.deprels if r == scheme)
        if scheme == "conj":
            return "0" if n == 0 else ">=1"
        return _count_label(n, case_boundaries)

    sentences: dict[str, list[str]] = {label: [] for label in labels}
    for sid in gold.sentences:
        sentences[bucket_of(sid)].append(sid)

    # one full match, then per-bucket slices, so bucket counts sum to the total
    m = scoring.match(extractions, gold, cap=cap)
    synset_sentence = {syn.id: syn.sentence_id for syn in gold.synsets}
    reports: dict[str, scoring.ScoreReport] = {}
    for label in labels:
        ids = set(sentences[label])
        sliced = scoring.MatchMatrix(
            facet=m.facet,
            by_sentence={sid: rows for sid, rows in m.by_sentence.items() if sid in ids},
        )
        part = {
            syn_id: sent_id
            for syn_id, sent_id in synset_sentence.items()
            if sent_id in ids
        }
        reports[label] = scoring.score_sets(sliced, part)
    return FeatureBuckets(
        scheme=scheme,
        labels=labels,
        sentences={label: tuple(ids) for label, ids in sentences.items()},
        reports=reports,
    )
