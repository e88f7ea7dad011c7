"""Bundled reference case: one English-Hindi sentence evaluated across five
engines by two judges, plus known agreement ratios.  `heval verify-paper`
recomputes everything here and compares against the reference values."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .rubric import final_score, round_half_up, validate_vector

ENGINE_NAMES = {
    "E1": "Microsoft Translator",
    "E2": "Google Translator",
    "E3": "Moses Syntax Based MT",
    "E4": "Moses Phrase Based MT",
    "E5": "Example Based MT",
}

REFERENCE_SOURCE = (
    "Most impressive are the black and white chessboard marble floor, the four"
    " tall minarets (40 m high) at the corners of the structure, and the"
    " majestic dome in the middle."
)

REFERENCE_OUTPUTS = {
    "E1": "सबसे प्रभावशाली हैं काले और सफेद बिसात संगमरमर फर्श, चार लंबा मीनारों (40 मीटर ऊँची) संरचना है, और बीच में राजसी गुंबद के कोने में।",
    "E2": "सबसे प्रभावशाली बिसात काले और सफेद संगमरमर का फर्श, संरचना के कोनों पर चार लंबा मीनारों (40 मीटर ऊँची), और बीच में राजसी गुंबद हैं.",
    "E3": "ज्यादातर impressive हैं , काला और सफेद chessboard छतें मंजिल , के चार लंबे मीनारों (40 केंद्रीय high) पर के जनपथ के के structure , और के प्रकाशित गुम्बद के मध्य में है ।",
    "E4": "Most के के काला और सफेद संगमरमर chessboard floor , impressive हैं चार लंबे minarets के corners पर (40 मी . ऊँचा) संरचना , मैजेस्टिक गुम्बद मध्य में और ।",
    "E5": "सबसे हैं के काले और सफेद संगमरमर मंजिल , चार ऊँची मीनारों (मी . ऊँचे) के कोने-कोने की संरचना , और के मैजेस्टिक गुम्बद के मध्य में 40 के पर है ।",
}

NA = None

# (engine, judge) -> eleven feature levels, and the reference overall score.
REFERENCE_VECTORS: dict[tuple[str, str], list[Optional[int]]] = {
    ("E1", "Human1"): [3, 4, 4, NA, 3, 2, 3, 4, 3, 3, 3],
    ("E1", "Human2"): [2, 4, 4, NA, 3, 3, 3, 4, 2, 2, 2],
    ("E2", "Human1"): [4, 4, 4, NA, 4, 3, 4, 4, 4, 3, 3],
    ("E2", "Human2"): [4, 4, 4, NA, 4, 4, 4, 4, 4, 3, 3],
    ("E3", "Human1"): [2, 2, 2, NA, 2, 1, 1, 1, 1, 1, 1],
    ("E3", "Human2"): [2, 2, 2, NA, 1, 1, 1, 1, 1, 0, 1],
    ("E4", "Human1"): [2, 1, 1, NA, 1, 0, 1, 3, 1, 1, 1],
    ("E4", "Human2"): [2, 0, 0, NA, 1, 0, 1, 3, 1, 0, 1],
    ("E5", "Human1"): [2, 2, 2, NA, 2, 1, 1, 2, 1, 1, 2],
    ("E5", "Human2"): [2, 2, 2, NA, 2, 1, 1, 2, 1, 1, 2],
}

REFERENCE_OVERALL: dict[tuple[str, str], float] = {
    ("E1", "Human1"): 0.80,
    ("E1", "Human2"): 0.73,
    ("E2", "Human1"): 0.93,
    ("E2", "Human2"): 0.95,
    ("E3", "Human1"): 0.35,
    ("E3", "Human2"): 0.30,
    ("E4", "Human1"): 0.30,
    ("E4", "Human2"): 0.23,
    ("E5", "Human1"): 0.40,
    ("E5", "Human2"): 0.40,
}

REFERENCE_ADEQUACY = {"E1": 3, "E2": 4, "E3": 2, "E4": 2, "E5": 2}
REFERENCE_FLUENCY = {"E1": 3, "E2": 4, "E3": 2, "E4": 2, "E5": 3}

# (label, agreeing sentences, total sentences, reference percentage)
REFERENCE_AGREEMENTS = [
    ("highest-rank, all engines", 842, 1300, 64.77),
    ("highest-rank, limited corpus", 804, 1300, 61.85),
    ("engine-wise, E1", 849, 1300, 65.30),
    ("engine-wise, E2", 885, 1300, 68.07),
    ("engine-wise, E3", 959, 1300, 73.77),
    ("engine-wise, E4", 967, 1300, 74.38),
    ("engine-wise, E5", 1067, 1300, 82.07),
]


@dataclass(frozen=True)
class Check:
    name: str
    computed: float
    expected: float
    tolerance: float

    @property
    def ok(self) -> bool:
        # several reference diffs sit exactly on the tolerance (e.g. 0.725 vs
        # 0.73); the epsilon keeps binary float noise from tipping them over
        return abs(self.computed - self.expected) <= self.tolerance + 1e-9


def score_checks() -> list[Check]:
    """Recompute each reference overall score from its feature levels.
    Tolerance 0.005 on the unrounded value against the printed one."""
    checks = []
    for (engine, judge), raw in REFERENCE_VECTORS.items():
        score = final_score(validate_vector(raw)).value
        checks.append(
            Check(
                name=f"overall score {engine}/{judge}",
                computed=float(score),
                expected=REFERENCE_OVERALL[(engine, judge)],
                tolerance=0.005,
            )
        )
    return checks


def agreement_checks() -> list[Check]:
    """Recompute each reference agreement percentage from its count pair.
    Tolerance 0.01 absorbs mixed rounding in the reference values."""
    checks = []
    for label, hits, total, expected in REFERENCE_AGREEMENTS:
        pct = float(round_half_up(Fraction(100 * hits, total), places=2))
        checks.append(
            Check(
                name=f"agreement {label} ({hits}/{total})",
                computed=pct,
                expected=expected,
                tolerance=0.01,
            )
        )
    return checks


def all_checks() -> list[Check]:
    return score_checks() + agreement_checks()
