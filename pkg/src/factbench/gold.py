"""Gold-standard fact synsets: pattern grammar, file format, expansion.

A gold corpus groups, per sentence, a set of *fact synsets*. Each synset
enumerates every acceptable surface form of one fact as triple patterns.
A pattern slot is a sequence of literal tokens, optional groups, and
alternation groups:

    [ tok ... ]        the bracketed tokens may be present or absent, as a unit
    { alt | alt ... }  exactly one alternative is present

Groups never nest. Expanding a pattern takes the Cartesian product of all
group choices across the three slots and yields a set of concrete triples.

File format (UTF-8, line-based, tab-separated):

    sent <TAB> <sentence_id> <TAB> <tokenized sentence text>
    fact <TAB> <sentence_id> <TAB> <synset_id> <TAB> <subj> <TAB> <pred> <TAB> <obj> [<TAB> <flags>]

A ``sent`` line must precede the ``fact`` lines that reference it. Several
``fact`` lines may share a synset id; their patterns accumulate into one
synset. Blank lines and lines starting with ``#`` are ignored. The one
recognized flag is ``no-entity``, marking a pattern whose subject or object
is not a clean standalone concept. The five characters ``[ ] { } |`` are
structural wherever they appear, so literal tokens cannot contain them.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Union

from .model import ModelError, Sentence, Token, TokenSeq, Triple

DEFAULT_EXPANSION_CAP = 10**6

ENV_EXPANSION_CAP = "BENCHIE_EXPANSION_CAP"

STRUCTURAL_CHARS = frozenset("[]{}|")


class GoldParseError(ValueError):
    """Malformed gold file or pattern text; carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        prefix = ""
        if line is not None:
            prefix = f"line {line}: " if column is None else f"line {line}, column {column}: "
        super().__init__(prefix + message)


class ExpansionCapError(ValueError):
    """A pattern's expansion count exceeds the configured cap."""

    def __init__(self, count: int, cap: int, context: str = ""):
        self.count = count
        self.cap = cap
        where = f" in {context}" if context else ""
        super().__init__(
            f"pattern{where} expands to {count} triples, exceeding the cap of {cap}"
        )


def expansion_cap_from_env(default: int = DEFAULT_EXPANSION_CAP) -> int:
    """Read the per-pattern expansion cap override from the environment."""
    raw = os.environ.get(ENV_EXPANSION_CAP)
    if raw is None:
        return default
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_EXPANSION_CAP} must be an integer, got {raw!r}")
    if cap < 1:
        raise ValueError(f"{ENV_EXPANSION_CAP} must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class LiteralToken:
    token: Token


@dataclass(frozen=True)
class OptionalGroup:
    tokens: tuple[Token, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ModelError("optional group must contain at least one token")


@dataclass(frozen=True)
class AlternationGroup:
    alternatives: tuple[tuple[Token, ...], ...]

    def __post_init__(self) -> None:
        if not self.alternatives:
            raise ModelError("alternation group must have at least one alternative")
        if any(not alt for alt in self.alternatives):
            raise ModelError("alternation alternatives must be non-empty")


SlotElement = Union[LiteralToken, OptionalGroup, AlternationGroup]


@dataclass(frozen=True)
class SlotPattern:
    """One slot of a triple pattern: literals, optionals, alternations."""

    elements: tuple[SlotElement, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise ModelError("slot pattern must have at least one element")
        # All-optional slots could expand to an empty slot, which Triple forbids.
        if all(isinstance(e, OptionalGroup) for e in self.elements):
            raise ModelError("slot pattern needs at least one mandatory element")

    def variant_count(self) -> int:
        """Number of raw variant choices (before deduplication)."""
        n = 1
        for e in self.elements:
            if isinstance(e, OptionalGroup):
                n *= 2
            elif isinstance(e, AlternationGroup):
                n *= len(e.alternatives)
        return n

    def variants(self) -> list[TokenSeq]:
        """All concrete token sequences, deduplicated, first-seen order."""
        return self._expand(minimal=False)

    def minimal_variants(self) -> list[TokenSeq]:
        """Variants with every optional group absent."""
        return self._expand(minimal=True)

    def _expand(self, minimal: bool) -> list[TokenSeq]:
        choices: list[list[tuple[Token, ...]]] = []
        for e in self.elements:
            if isinstance(e, LiteralToken):
                choices.append([(e.token,)])
            elif isinstance(e, OptionalGroup):
                choices.append([()] if minimal else [(), e.tokens])
            else:
                choices.append(list(e.alternatives))
        seen: dict[TokenSeq, None] = {}
        for combo in itertools.product(*choices):
            seq = TokenSeq(tuple(itertools.chain.from_iterable(combo)))
            seen.setdefault(seq, None)
        return list(seen)


@dataclass(frozen=True)
class TriplePattern:
    """A compact encoding of a set of acceptable triples for one fact."""

    subject: SlotPattern
    predicate: SlotPattern
    object: SlotPattern
    entity_clean: bool = True

    @property
    def slots(self) -> tuple[SlotPattern, SlotPattern, SlotPattern]:
        return (self.subject, self.predicate, self.object)

    def expansion_count(self) -> int:
        """Closed-form raw expansion size (product of group choice counts)."""
        n = 1
        for slot in self.slots:
            n *= slot.variant_count()
        return n


def parse_slot(text: str, *, line: int | None = None, base_column: int = 1) -> SlotPattern:
    """Parse one slot pattern from its textual form.

    ``base_column`` is the 1-based column of ``text`` within its source line,
    so reported columns point into the original line.
    """

    def err(message: str, pos: int) -> GoldParseError:
        return GoldParseError(message, line=line, column=base_column + pos)

    elements: list[SlotElement] = []
    group: list[Token] | None = None          # pending [ ... ] tokens
    alts: list[list[Token]] | None = None     # pending { ... } alternatives
    pending = ""

    def flush() -> None:
        nonlocal pending
        if not pending:
            return
        tok = Token(pending)
        if group is not None:
            group.append(tok)
        elif alts is not None:
            alts[-1].append(tok)
        else:
            elements.append(LiteralToken(tok))
        pending = ""

    for i, ch in enumerate(text):
        if ch.isspace():
            flush()
        elif ch == "[":
            flush()
            if group is not None or alts is not None:
                raise err("groups cannot nest", i)
            group = []
        elif ch == "]":
            flush()
            if group is None:
                raise err("']' without matching '['", i)
            if not group:
                raise err("empty optional group", i)
            elements.append(OptionalGroup(tuple(group)))
            group = None
        elif ch == "{":
            flush()
            if group is not None or alts is not None:
                raise err("groups cannot nest", i)
            alts = [[]]
        elif ch == "|":
            flush()
            if alts is None:
                raise err("'|' outside an alternation group", i)
            if not alts[-1]:
                raise err("empty alternation alternative", i)
            alts.append([])
        elif ch == "}":
            flush()
            if alts is None:
                raise err("'}' without matching '{'", i)
            if not alts[-1]:
                raise err("empty alternation alternative", i)
            elements.append(AlternationGroup(tuple(tuple(a) for a in alts)))
            alts = None
        else:
            pending += ch
    flush()
    if group is not None:
        raise err("unclosed '['", len(text))
    if alts is not None:
        raise err("unclosed '{'", len(text))
    if not elements:
        raise err("empty slot pattern", 0)
    try:
        return SlotPattern(tuple(elements))
    except ModelError as e:
        raise err(str(e), 0)


def serialize_slot(slot: SlotPattern) -> str:
    parts: list[str] = []
    for e in slot.elements:
        if isinstance(e, LiteralToken):
            parts.append(e.token.surface)
        elif isinstance(e, OptionalGroup):
            parts.append("[ " + " ".join(t.surface for t in e.tokens) + " ]")
        else:
            alts = " | ".join(" ".join(t.surface for t in alt) for alt in e.alternatives)
            parts.append("{ " + alts + " }")
    return " ".join(parts)


@dataclass(frozen=True)
class FactSynset:
    """All acceptable surface forms of one fact, as one or more patterns."""

    id: str
    sentence_id: str
    patterns: tuple[TriplePattern, ...]

    def __post_init__(self) -> None:
        if not self.id:
            raise ModelError("synset id must be non-empty")
        if not self.patterns:
            raise ModelError(f"synset {self.id!r} must have at least one pattern")


@dataclass
class GoldCorpus:
    """Sentences plus their fact synsets, in file order."""

    sentences: dict[str, Sentence]
    synsets: tuple[FactSynset, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for syn in self.synsets:
            if syn.id in seen:
                raise ModelError(f"duplicate synset id {syn.id!r}")
            seen.add(syn.id)
            if syn.sentence_id not in self.sentences:
                raise ModelError(
                    f"synset {syn.id!r} references unknown sentence {syn.sentence_id!r}"
                )

    def synsets_for(self, sentence_id: str) -> list[FactSynset]:
        return [s for s in self.synsets if s.sentence_id == sentence_id]


def expand(pattern: TriplePattern, cap: int = DEFAULT_EXPANSION_CAP, *, context: str = "") -> set[Triple]:
    """All concrete triples a pattern licenses.

    The raw combination count is computed in closed form first; if it
    exceeds ``cap`` the expansion is refused before any enumeration.
    """
    count = pattern.expansion_count()
    if count > cap:
        raise ExpansionCapError(count, cap, context)
    out: set[Triple] = set()
    for s in pattern.subject.variants():
        for p in pattern.predicate.variants():
            for o in pattern.object.variants():
                out.add(Triple(s, p, o))
    return out


def minimal_forms(pattern: TriplePattern, cap: int = DEFAULT_EXPANSION_CAP) -> set[Triple]:
    """Triples with every optional group absent (alternations still vary)."""
    count = 1
    for slot in pattern.slots:
        for e in slot.elements:
            if isinstance(e, AlternationGroup):
                count *= len(e.alternatives)
    if count > cap:
        raise ExpansionCapError(count, cap, "minimal forms")
    out: set[Triple] = set()
    for s in pattern.subject.minimal_variants():
        for p in pattern.predicate.minimal_variants():
            for o in pattern.object.minimal_variants():
                out.add(Triple(s, p, o))
    return out


def expand_corpus(
    gold: GoldCorpus, cap: int = DEFAULT_EXPANSION_CAP
) -> dict[str, set[Triple]]:
    """Expand every synset: union of its patterns' expansions, deduplicated."""
    out: dict[str, set[Triple]] = {}
    for syn in gold.synsets:
        triples: set[Triple] = set()
        for i, pattern in enumerate(syn.patterns):
            triples |= expand(pattern, cap, context=f"synset {syn.id}, pattern {i + 1}")
        out[syn.id] = triples
    return out


FLAG_NO_ENTITY = "no-entity"


def parse_gold(stream: Union[str, IO[str]]) -> GoldCorpus:
    """Parse a gold file into a corpus. See the module docstring for the format."""
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in stream]

    sentences: dict[str, Sentence] = {}
    order: list[str] = []                               # synset ids, first-seen
    patterns: dict[str, list[TriplePattern]] = {}
    synset_sentence: dict[str, str] = {}

    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        kind = fields[0]
        if kind == "sent":
            if len(fields) != 3:
                raise GoldParseError(
                    f"sent record needs 3 tab-separated fields, got {len(fields)}",
                    line=lineno,
                )
            _, sid, text = fields
            if sid in sentences:
                raise GoldParseError(f"duplicate sentence id {sid!r}", line=lineno)
            if not text.strip():
                raise GoldParseError("sentence text must be non-empty", line=lineno)
            try:
                sentences[sid] = Sentence.from_text(sid, text)
            except ModelError as e:
                raise GoldParseError(str(e), line=lineno)
        elif kind == "fact":
            if len(fields) not in (6, 7):
                raise GoldParseError(
                    f"fact record needs 6 or 7 tab-separated fields, got {len(fields)}",
                    line=lineno,
                )
            _, sid, synset_id, subj, pred, obj = fields[:6]
            if sid not in sentences:
                raise GoldParseError(
                    f"fact references unknown sentence {sid!r} "
                    f"(sent line must come first)",
                    line=lineno,
                )
            prior = synset_sentence.get(synset_id)
            if prior is None:
                synset_sentence[synset_id] = sid
                patterns[synset_id] = []
                order.append(synset_id)
            elif prior != sid:
                raise GoldParseError(
                    f"synset id {synset_id!r} reused across sentences "
                    f"{prior!r} and {sid!r}",
                    line=lineno,
                )
            entity_clean = True
            if len(fields) == 7:
                for flag in filter(None, (f.strip() for f in fields[6].split(","))):
                    if flag == FLAG_NO_ENTITY:
                        entity_clean = False
                    else:
                        raise GoldParseError(f"unknown flag {flag!r}", line=lineno)
            slot_texts = (subj, pred, obj)
            slot_names = ("subject", "predicate", "object")
            # column of each slot within the original line, for error reports
            base = 1
            cols = []
            for f in fields:
                cols.append(base)
                base += len(f) + 1
            slots = []
            for name, text, col in zip(slot_names, slot_texts, cols[3:6]):
                if not text.strip():
                    raise GoldParseError(
                        f"empty mandatory {name} slot", line=lineno, column=col
                    )
                slots.append(parse_slot(text, line=lineno, base_column=col))
            patterns[synset_id].append(
                TriplePattern(slots[0], slots[1], slots[2], entity_clean=entity_clean)
            )
        else:
            raise GoldParseError(
                f"unknown record type {kind!r} (expected 'sent' or 'fact')",
                line=lineno,
            )

    synsets = tuple(
        FactSynset(sid, synset_sentence[sid], tuple(patterns[sid])) for sid in order
    )
    return GoldCorpus(sentences=sentences, synsets=synsets)


def serialize_gold(gold: GoldCorpus) -> str:
    """Render a corpus back to the gold file format.

    Parsing the output reproduces the corpus exactly. Sentence lines come
    first (corpus order), then one fact line per pattern in synset order.
    """
    out: list[str] = []
    for sentence in gold.sentences.values():
        out.append(f"sent\t{sentence.id}\t{sentence.text}")
    for syn in gold.synsets:
        for pattern in syn.patterns:
            row = [
                "fact",
                syn.sentence_id,
                syn.id,
                serialize_slot(pattern.subject),
                serialize_slot(pattern.predicate),
                serialize_slot(pattern.object),
            ]
            if not pattern.entity_clean:
                row.append(FLAG_NO_ENTITY)
            out.append("\t".join(row))
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class ValidationIssue:
    """One finding from validate_corpus; ``kind`` is a stable machine tag."""

    kind: str
    synset_id: str
    message: str


def _pattern_token_checks(pattern: TriplePattern) -> Iterable[Counter]:
    """Token multisets to test against the sentence, one per alternation choice.

    Containment is monotone when optional groups are dropped, so only the
    all-optionals-present form of each alternation assignment needs checking.
    """
    per_slot: list[list[list[str]]] = []
    for slot in pattern.slots:
        slot_choices: list[list[str]] = [[]]
        for e in slot.elements:
            if isinstance(e, LiteralToken):
                for c in slot_choices:
                    c.append(e.token.key)
            elif isinstance(e, OptionalGroup):
                for c in slot_choices:
                    c.extend(t.key for t in e.tokens)
            else:
                slot_choices = [
                    c + [t.key for t in alt]
                    for c in slot_choices
                    for alt in e.alternatives
                ]
        per_slot.append(slot_choices)
    for s, p, o in itertools.product(*per_slot):
        yield Counter(s) + Counter(p) + Counter(o)


def validate_corpus(gold: GoldCorpus, cap: int = DEFAULT_EXPANSION_CAP) -> list[ValidationIssue]:
    """Check corpus hygiene; returns findings rather than raising.

    Findings:
      token-not-in-sentence   a pattern licenses a triple whose token multiset
                              is not contained in its sentence's token multiset
                              (a token used twice must occur twice)
      duplicate-triple        the same expanded triple appears in two synsets
                              of the same sentence
    """
    issues: list[ValidationIssue] = []
    sentence_counts = {
        sid: Counter(t.key for t in s.tokens) for sid, s in gold.sentences.items()
    }
    for syn in gold.synsets:
        sent_count = sentence_counts[syn.sentence_id]
        for i, pattern in enumerate(syn.patterns):
            for need in _pattern_token_checks(pattern):
                missing = need - sent_count
                if missing:
                    toks = ", ".join(sorted(missing))
                    issues.append(
                        ValidationIssue(
                            kind="token-not-in-sentence",
                            synset_id=syn.id,
                            message=(
                                f"pattern {i + 1} can produce a triple using "
                                f"token(s) not available in sentence "
                                f"{syn.sentence_id!r}: {toks}"
                            ),
                        )
                    )
                    break
    expanded = expand_corpus(gold, cap)
    by_sentence: dict[str, dict[Triple, str]] = {}
    for syn in gold.synsets:
        seen = by_sentence.setdefault(syn.sentence_id, {})
        for triple in sorted(expanded[syn.id], key=lambda t: t.key):
            owner = seen.get(triple)
            if owner is None:
                seen[triple] = syn.id
            elif owner != syn.id:
                issues.append(
                    ValidationIssue(
                        kind="duplicate-triple",
                        synset_id=syn.id,
                        message=(
                            f"triple {triple} also appears in synset {owner!r}"
                        ),
                    )
                )
    return issues
