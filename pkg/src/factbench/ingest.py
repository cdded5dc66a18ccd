"""Readers and adapters for system output and tagged sentences.

Extraction TSV, one extraction per line:

    <sentence_id> <TAB> <subject> <TAB> <predicate> <TAB> <object> [<TAB> <slot> ...] [<TAB> <confidence>]

Slots are plain space-separated tokens (no pattern syntax). Systems that
emit n-ary tuples put the extra arguments in columns after the object;
``collapse_nary`` folds them into the object by concatenation. When a
confidence column is expected it is always the last column. Blank lines
and lines starting with ``#`` are ignored.

Tagged-sentence files are line-based blocks separated by blank lines.
Each block starts with a ``# sent_id = <id>`` comment and contains one
row per token, either full 10-column dependency rows (token id, form,
lemma, upos, ...) or simplified 3-column ``form TAB upos TAB deprel`` /
2-column ``form TAB upos`` rows.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable, Union

from .gold import GoldCorpus
from .model import (
    Extraction,
    ModelError,
    Sentence,
    TokenSeq,
    Triple,
    UnknownSentenceError,
    normalize,
)


class ExtractionParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class TaggedParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class RawExtraction:
    """An extraction as read from file: three or more slots, pre-collapse."""

    sentence_id: str
    slots: tuple[TokenSeq, ...]
    confidence: float | None = None

    def __post_init__(self) -> None:
        if len(self.slots) < 3:
            raise ModelError("raw extraction needs at least 3 slots")


def _lines(stream: Union[str, IO[str]]) -> list[str]:
    if isinstance(stream, str):
        return stream.splitlines()
    return [ln.rstrip("\n") for ln in stream]


def read_extractions(
    stream: Union[str, IO[str]], *, with_confidence: bool = False
) -> list[RawExtraction]:
    """Parse an extraction TSV. Slot count per line may vary (n-ary output)."""
    out: list[RawExtraction] = []
    for lineno, raw in enumerate(_lines(stream), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        confidence = None
        if with_confidence:
            if len(fields) < 5:
                raise ExtractionParseError(
                    f"need sentence id, 3 slots and a confidence column, "
                    f"got {len(fields)} fields",
                    line=lineno,
                )
            try:
                confidence = float(fields[-1])
            except ValueError:
                raise ExtractionParseError(
                    f"confidence column is not numeric: {fields[-1]!r}", line=lineno
                )
            fields = fields[:-1]
        if len(fields) < 4:
            raise ExtractionParseError(
                f"need sentence id and 3 slot columns, got {len(fields)} fields",
                line=lineno,
            )
        sid = fields[0]
        if not sid.strip():
            raise ExtractionParseError("empty sentence id", line=lineno)
        slots = []
        for i, text in enumerate(fields[1:], start=2):
            seq = normalize(text)
            if len(seq) == 0:
                raise ExtractionParseError(f"empty slot in column {i}", line=lineno)
            slots.append(seq)
        try:
            out.append(
                RawExtraction(sid, tuple(slots), confidence=confidence)
            )
        except ModelError as e:
            raise ExtractionParseError(str(e), line=lineno)
    return out


def collapse_nary(raw: RawExtraction) -> Extraction:
    """Fold slots 3..n into the object slot by concatenation, in order."""
    obj = raw.slots[2]
    for extra in raw.slots[3:]:
        obj = obj + extra
    return Extraction(
        sentence_id=raw.sentence_id,
        triple=Triple(raw.slots[0], raw.slots[1], obj),
        confidence=raw.confidence,
    )


def to_extractions(raws: Iterable[RawExtraction], *, nary: bool = False) -> list[Extraction]:
    """Convert raw rows to triples; without ``nary``, extra slots are an error."""
    out: list[Extraction] = []
    for i, raw in enumerate(raws, start=1):
        if not nary and len(raw.slots) > 3:
            raise ExtractionParseError(
                f"extraction {i} has {len(raw.slots)} slots; "
                f"re-run with n-ary collapsing enabled to accept it"
            )
        out.append(collapse_nary(raw))
    return out


def filter_implicit(
    extractions: list[Extraction], gold: GoldCorpus
) -> tuple[list[Extraction], list[Extraction]]:
    """Split extractions into (kept, removed) by token provenance.

    An extraction is kept iff the multiset of its triple's tokens is
    contained in its sentence's token multiset: every token must occur in
    the sentence at least as often as the triple uses it. Comparison uses
    the case-folded keys.
    """
    counts: dict[str, Counter] = {
        sid: Counter(t.key for t in s.tokens) for sid, s in gold.sentences.items()
    }
    kept: list[Extraction] = []
    removed: list[Extraction] = []
    for e in extractions:
        if e.sentence_id not in counts:
            raise UnknownSentenceError(
                f"extraction references unknown sentence {e.sentence_id!r}"
            )
        need = Counter(t.key for t in e.triple.tokens())
        if need - counts[e.sentence_id]:
            removed.append(e)
        else:
            kept.append(e)
    return kept, removed


@dataclass(frozen=True)
class TaggedSentence:
    """A sentence with part-of-speech tags and optional dependency relations."""

    sentence: Sentence
    pos: tuple[str, ...]
    deprels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.sentence.tokens)
        if len(self.pos) != n:
            raise ModelError(
                f"sentence {self.sentence.id!r}: {len(self.pos)} tags "
                f"for {n} tokens"
            )
        if self.deprels is not None and len(self.deprels) != n:
            raise ModelError(
                f"sentence {self.sentence.id!r}: {len(self.deprels)} deprels "
                f"for {n} tokens"
            )


DEFAULT_VERB_TAGS = frozenset({"VERB"})


def naive_extract(
    tagged: TaggedSentence, verb_tags: frozenset[str] = DEFAULT_VERB_TAGS
) -> list[Extraction]:
    """Verb-pivot baseline: one triple per verb occurrence.

    For each token whose tag is in ``verb_tags``, the verb is the
    predicate, everything before it the subject, everything after it the
    object. Positions with an empty subject or object produce nothing.
    """
    toks = tagged.sentence.tokens.tokens
    out: list[Extraction] = []
    for i, tag in enumerate(tagged.pos):
        if tag not in verb_tags:
            continue
        if i == 0 or i == len(toks) - 1:
            continue
        out.append(
            Extraction(
                sentence_id=tagged.sentence.id,
                triple=Triple(
                    TokenSeq(toks[:i]),
                    TokenSeq((toks[i],)),
                    TokenSeq(toks[i + 1 :]),
                ),
            )
        )
    return out


def read_tagged(stream: Union[str, IO[str]]) -> list[TaggedSentence]:
    """Parse a tagged-sentence file. See the module docstring for the format."""
    out: list[TaggedSentence] = []
    seen_ids: set[str] = set()

    sent_id: str | None = None
    forms: list[str] = []
    tags: list[str] = []
    rels: list[str | None] = []
    block_start: int | None = None

    def finish() -> None:
        nonlocal sent_id, forms, tags, rels, block_start
        if not forms:
            sent_id = None
            block_start = None
            return
        if sent_id is None:
            raise TaggedParseError(
                "token block without a preceding '# sent_id = ...' comment",
                line=block_start,
            )
        if sent_id in seen_ids:
            raise TaggedParseError(f"duplicate sent_id {sent_id!r}", line=block_start)
        seen_ids.add(sent_id)
        have_rels = [r for r in rels if r is not None]
        if have_rels and len(have_rels) != len(forms):
            raise TaggedParseError(
                f"sentence {sent_id!r} mixes rows with and without deprels",
                line=block_start,
            )
        try:
            sentence = Sentence.from_text(sent_id, " ".join(forms))
            out.append(
                TaggedSentence(
                    sentence=sentence,
                    pos=tuple(tags),
                    deprels=tuple(have_rels) if have_rels else None,
                )
            )
        except ModelError as e:
            raise TaggedParseError(str(e), line=block_start)
        sent_id = None
        forms, tags, rels = [], [], []
        block_start = None

    all_lines = _lines(stream)
    for lineno, raw in enumerate(all_lines, start=1):
        line = raw.rstrip("\r")
        stripped = line.strip()
        if not stripped:
            finish()
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                if key.strip() == "sent_id":
                    if forms:
                        raise TaggedParseError(
                            "sent_id comment inside a token block", line=lineno
                        )
                    sent_id = value.strip()
                    if not sent_id:
                        raise TaggedParseError("empty sent_id", line=lineno)
                    block_start = lineno
            continue
        fields = line.split("\t")
        if block_start is None:
            block_start = lineno
        if len(fields) >= 10:
            # full dependency rows: skip range ids (multiword) and decimal
            # ids (empty nodes), keep regular word rows
            tok_id = fields[0]
            if "-" in tok_id or "." in tok_id:
                continue
            forms.append(fields[1])
            tags.append(fields[3])
            rels.append(fields[7] if fields[7] not in ("", "_") else None)
        elif len(fields) == 3:
            forms.append(fields[0])
            tags.append(fields[1])
            rels.append(fields[2])
        elif len(fields) == 2:
            forms.append(fields[0])
            tags.append(fields[1])
            rels.append(None)
        else:
            raise TaggedParseError(
                f"token row needs 2, 3, or 10+ tab-separated fields, "
                f"got {len(fields)}",
                line=lineno,
            )
        for i, f in enumerate((forms[-1], tags[-1])):
            if not f.strip():
                raise TaggedParseError(
                    f"empty {'form' if i == 0 else 'tag'} field", line=lineno
                )
    finish()
    return out
