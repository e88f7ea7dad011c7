"""HEval rubric: eleven linguistic features scored 0-4 (or not applicable),
combined into a single exact-rational sentence score in [0, 1].

Everything here is pure and stateless; the rest of the package builds on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext, ROUND_HALF_UP
from fractions import Fraction
from typing import Optional, Sequence

FEATURE_COUNT = 11

MIN_LEVEL = 0
MAX_LEVEL = 4

SCALE_LABELS = {
    4: "Ideal",
    3: "Perfect",
    2: "Acceptable",
    1: "Partially Acceptable",
    0: "Not Acceptable",
}


class RubricError(ValueError):
    """Base class for rubric validation failures."""


class LengthMismatch(RubricError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"expected {expected} feature slots, got {got}")
        self.expected = expected
        self.got = got


class OutOfRange(RubricError):
    def __init__(self, ordinal: Optional[int], value: object):
        where = f"feature {ordinal}: " if ordinal is not None else ""
        super().__init__(f"{where}level {value!r} not in {MIN_LEVEL}..{MAX_LEVEL}")
        self.ordinal = ordinal
        self.value = value


class AllNotApplicable(RubricError):
    def __init__(self):
        super().__init__(
            "all 11 features marked not-applicable; at least one must be scored"
        )


@dataclass(frozen=True)
class Feature:
    ordinal: int  # 1-based
    short_name: str
    description: str


FEATURES: tuple[Feature, ...] = (
    Feature(1, "gender_number", "Translation of Gender and Number of the Noun(s)."),
    Feature(2, "tense", "Translation of tense in the sentence."),
    Feature(3, "voice", "Translation of voice in the sentence."),
    Feature(4, "proper_nouns", "Identification of the Proper Noun(s)."),
    Feature(
        5,
        "adjectives_adverbs",
        "Use of Adjectives and Adverbs corresponding to the Nouns and Verbs.",
    ),
    Feature(6, "lexical_choice", "Selection of proper words/synonyms (Lexical Choice)."),
    Feature(7, "phrase_sequence", "Sequence of phrases and clauses in the translation."),
    Feature(8, "punctuation", "Use of Punctuation Marks in the translation."),
    Feature(9, "fluency", "Fluency of translated text and translator's proficiency."),
    Feature(
        10,
        "semantics",
        "Maintaining the semantics of the source sentence in the translation.",
    ),
    Feature(
        11,
        "syntax_meaning",
        "Evaluating the translation of source sentence (With respect to syntax and"
        " intended meaning).",
    ),
)


@dataclass(frozen=True)
class AnnotationVector:
    """One judge's eleven feature levels for one (sentence, engine) pair.

    ``None`` encodes not-applicable.  Construction enforces validity, so any
    instance in circulation can be scored without further checks.
    """

    scores: tuple[Optional[int], ...]

    def __post_init__(self):
        if len(self.scores) != FEATURE_COUNT:
            raise LengthMismatch(FEATURE_COUNT, len(self.scores))
        applicable = 0
        for ordinal, level in enumerate(self.scores, start=1):
            if level is None:
                continue
            if not isinstance(level, int) or isinstance(level, bool):
                raise OutOfRange(ordinal, level)
            if not MIN_LEVEL <= level <= MAX_LEVEL:
                raise OutOfRange(ordinal, level)
            applicable += 1
        if applicable == 0:
            raise AllNotApplicable()

    @property
    def applicable_count(self) -> int:
        return sum(1 for s in self.scores if s is not None)


@dataclass(frozen=True)
class SentenceScore:
    """Exact final score: numerator over 4 x (number of applicable features)."""

    numerator: int
    applicable_count: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 4 * self.applicable_count)


def validate_vector(raw: Sequence[Optional[int]]) -> AnnotationVector:
    """Build an AnnotationVector from 11 optional integers (None = NA)."""
    if len(raw) != FEATURE_COUNT:
        raise LengthMismatch(FEATURE_COUNT, len(raw))
    return AnnotationVector(tuple(raw))


def final_score(v: AnnotationVector) -> SentenceScore:
    """Sum the applicable levels and divide by 4 x (applicable feature count).

    Not-applicable features contribute to neither numerator nor denominator.
    """
    applicable = [s for s in v.scores if s is not None]
    return SentenceScore(numerator=sum(applicable), applicable_count=len(applicable))


def scale_label(level: int) -> str:
    if level not in SCALE_LABELS:
        raise OutOfRange(None, level)
    return SCALE_LABELS[level]


def round_half_up(value: Fraction, places: int = 2) -> Decimal:
    """Presentation rounding; storage stays exact."""
    with localcontext() as ctx:
        ctx.prec = 50
        d = Decimal(value.numerator) / Decimal(value.denominator)
        return d.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)


def format_score(value: Fraction, places: int = 4) -> str:
    return str(round_half_up(value, places))
