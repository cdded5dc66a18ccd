"""Core types shared by the whole toolkit: tokens, sentences, triples.

Comparison is positional and case-insensitive everywhere. Two token
sequences are equal iff they have the same length and the case-folded
surfaces agree pairwise. Nothing is lemmatized, stemmed, or stripped;
inputs are expected to be pre-tokenized (punctuation split off), and a
whitespace split is the only tokenization this package performs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


class ModelError(ValueError):
    """A domain invariant was violated at construction time."""


class UnknownSentenceError(ValueError):
    """An extraction or record references a sentence id not in the corpus."""


@dataclass(frozen=True, eq=False)
class Token:
    """One token. Equality and hashing use the case-folded surface."""

    surface: str
    key: str = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ModelError(
                f"token must be a non-empty string without whitespace: {self.surface!r}"
            )
        object.__setattr__(self, "key", self.surface.casefold())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Token):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return self.surface


@dataclass(frozen=True, eq=False)
class TokenSeq:
    """An ordered token sequence; the unit of slot-level comparison."""

    tokens: tuple[Token, ...]
    key: tuple[str, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "key", tuple(t.key for t in self.tokens))

    @classmethod
    def from_surfaces(cls, surfaces: Iterable[str]) -> "TokenSeq":
        return cls(tuple(Token(s) for s in surfaces))

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __add__(self, other: "TokenSeq") -> "TokenSeq":
        if not isinstance(other, TokenSeq):
            return NotImplemented
        return TokenSeq(self.tokens + other.tokens)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TokenSeq):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return self.text()


def normalize(raw: str) -> TokenSeq:
    """Whitespace-split ``raw`` into a TokenSeq, dropping empty pieces.

    str.split() with no argument collapses runs of whitespace and ignores
    leading/trailing whitespace, so '' and '   ' both give an empty sequence.
    """
    return TokenSeq.from_surfaces(raw.split())


def seq_equal(a: TokenSeq, b: TokenSeq) -> bool:
    """Positional case-insensitive equality; same as ``a == b``."""
    return a == b


@dataclass(frozen=True)
class Sentence:
    """An input sentence with a stable id and its tokenization."""

    id: str
    text: str
    tokens: TokenSeq

    def __post_init__(self) -> None:
        if not self.id:
            raise ModelError("sentence id must be non-empty")
        if self.tokens.surfaces != tuple(self.text.split()):
            raise ModelError(
                f"sentence {self.id!r}: tokens must be the whitespace "
                f"tokenization of text"
            )

    @classmethod
    def from_text(cls, id: str, text: str) -> "Sentence":
        return cls(id=id, text=text, tokens=normalize(text))


@dataclass(frozen=True, eq=False)
class Triple:
    """A (subject; predicate; object) surface triple. Slots are non-empty."""

    subject: TokenSeq
    predicate: TokenSeq
    object: TokenSeq

    def __post_init__(self) -> None:
        for name in ("subject", "predicate", "object"):
            if len(getattr(self, name)) == 0:
                raise ModelError(f"triple {name} must be non-empty")

    @classmethod
    def from_surfaces(
        cls,
        subject: Iterable[str],
        predicate: Iterable[str],
        object: Iterable[str],
    ) -> "Triple":
        return cls(
            TokenSeq.from_surfaces(subject),
            TokenSeq.from_surfaces(predicate),
            TokenSeq.from_surfaces(object),
        )

    @property
    def slots(self) -> tuple[TokenSeq, TokenSeq, TokenSeq]:
        return (self.subject, self.predicate, self.object)

    @property
    def key(self) -> tuple[tuple[str, ...], ...]:
        return (self.subject.key, self.predicate.key, self.object.key)

    def tokens(self) -> tuple[Token, ...]:
        """All tokens of the triple, subject then predicate then object."""
        return self.subject.tokens + self.predicate.tokens + self.object.tokens

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Triple):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return f"({self.subject}; {self.predicate}; {self.object})"


@dataclass(frozen=True)
class Extraction:
    """A system extraction: a triple tied to a sentence, optional confidence."""

    sentence_id: str
    triple: Triple
    confidence: float | None = None

    def __post_init__(self) -> None:
        if not self.sentence_id:
            raise ModelError("extraction sentence_id must be non-empty")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ModelError(
                f"confidence must lie in [0, 1], got {self.confidence!r}"
            )

    @property
    def key(self) -> tuple:
        """Identity used for deduplication: sentence plus normalized triple."""
        return (self.sentence_id, self.triple.key)
