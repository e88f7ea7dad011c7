"""Inter-annotator agreement and correlation against external adequacy and
fluency measures.

Agreement results are exact integer ratios; correlation uses Pearson's
product-moment coefficient with a Fisher z-transform confidence interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import Optional, Sequence

from .analytics import RankTable, ScoreMatrix, credited_engine, score_matrix
from .store import Campaign, UnknownEngine


class StatsError(ValueError):
    pass


class SentenceSetMismatch(StatsError):
    pass


class LengthMismatch(StatsError):
    pass


class ZeroVariance(StatsError):
    pass


class DegenerateR(StatsError):
    pass


class TooFewSamples(StatsError):
    pass


class NoOverlap(StatsError):
    def __init__(self, engine_id: str, n: int):
        super().__init__(
            f"engine {engine_id!r}: only {n} paired sentences (need >= 4)"
        )
        self.engine_id = engine_id
        self.n = n


@dataclass(frozen=True)
class AgreementResult:
    numerator: int
    denominator: int

    @property
    def percentage(self) -> Fraction:
        return Fraction(100 * self.numerator, self.denominator)


@dataclass(frozen=True)
class CorrelationResult:
    engine_id: str
    measure: str
    n: int
    r: Optional[float]
    ci_low: Optional[float]
    ci_high: Optional[float]
    level: float = 0.95
    degenerate: Optional[str] = None  # "perfect_correlation" | "zero_variance"

    @property
    def trend(self) -> Optional[str]:
        if self.r is None:
            return None
        return "positive" if self.r > 0 else "negative" if self.r < 0 else "flat"


def _check_comparable(a: RankTable, b: RankTable) -> list[int]:
    if set(a.engine_subset) != set(b.engine_subset):
        raise SentenceSetMismatch("rank tables cover different engine subsets")
    if set(a.per_sentence) != set(b.per_sentence):
        raise SentenceSetMismatch("rank tables cover different sentence sets")
    return sorted(a.per_sentence)


def highest_rank_agreement(a: RankTable, b: RankTable) -> AgreementResult:
    """Fraction of sentences where both judges credit the same best engine
    (same tie-break as the highest-rank counts)."""
    sentences = _check_comparable(a, b)
    hits = sum(
        1
        for s in sentences
        if credited_engine(a.per_sentence[s], a.engine_subset)
        == credited_engine(b.per_sentence[s], b.engine_subset)
    )
    return AgreementResult(numerator=hits, denominator=len(sentences))


def enginewise_rank_agreement(
    a: RankTable, b: RankTable, engine_id: str
) -> AgreementResult:
    """Fraction of sentences where both judges give one engine the same rank."""
    if engine_id not in a.engine_subset:
        raise UnknownEngine(engine_id)
    sentences = _check_comparable(a, b)
    hits = sum(
        1
        for s in sentences
        if a.per_sentence[s][engine_id] == b.per_sentence[s][engine_id]
    )
    return AgreementResult(numerator=hits, denominator=len(sentences))


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation coefficient."""
    if len(x) != len(y):
        raise LengthMismatch(f"len(x)={len(x)} != len(y)={len(y)}")
    n = len(x)
    if n < 2:
        raise TooFewSamples("need at least 2 samples")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxx = math.fsum((xi - mx) ** 2 for xi in x)
    syy = math.fsum((yi - my) ** 2 for yi in y)
    if sxx == 0 or syy == 0:
        raise ZeroVariance("one input is constant")
    sxy = math.fsum((xi - mx) * (yi - my) for xi, yi in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def fisher_ci(r: float, n: int, level: float = 0.95) -> tuple[float, float]:
    """Confidence interval for Pearson r via the z-transform:
    atanh(r) +/- z_crit / sqrt(n - 3), mapped back with tanh."""
    if n < 4:
        raise TooFewSamples(f"need n >= 4, got {n}")
    if abs(r) >= 1.0:
        raise DegenerateR(f"|r| = {abs(r)} leaves no sampling variance")
    z_crit = NormalDist().inv_cdf((1 + level) / 2)
    z = math.atanh(r)
    hw = z_crit / math.sqrt(n - 3)
    return math.tanh(z - hw), math.tanh(z + hw)


def heval_vs_external(
    campaign: Campaign, judge_id: str, measure: str, level: float = 0.95
) -> dict[str, CorrelationResult]:
    """Per engine, correlate the judge's sentence scores with the external
    adequacy or fluency levels over sentences carrying both values."""
    matrix = score_matrix(campaign, judge_id)
    results: dict[str, CorrelationResult] = {}
    for engine in campaign.engines:
        pairs = []
        for (sentence_index, engine_id), score in matrix.entries.items():
            if engine_id != engine.id:
                continue
            rec = campaign.external_scores.get((sentence_index, engine.id, measure))
            if rec is not None:
                pairs.append((float(score.value), float(rec.level)))
        if len(pairs) < 4:
            raise NoOverlap(engine.id, len(pairs))
        xs = [p[0] for p in pairs]
        ys = [p[1] for p in pairs]
        try:
            r = pearson_r(xs, ys)
        except ZeroVariance:
            results[engine.id] = CorrelationResult(
                engine_id=engine.id,
                measure=measure,
                n=len(pairs),
                r=None,
                ci_low=None,
                ci_high=None,
                level=level,
                degenerate="zero_variance",
            )
            continue
        if abs(r) >= 1.0:
            results[engine.id] = CorrelationResult(
                engine_id=engine.id,
                measure=measure,
                n=len(pairs),
                r=r,
                ci_low=None,
                ci_high=None,
                level=level,
                degenerate="perfect_correlation",
            )
            continue
        lo, hi = fisher_ci(r, len(pairs), level=level)
        results[engine.id] = CorrelationResult(
            engine_id=engine.id,
            measure=measure,
            n=len(pairs),
            r=r,
            ci_low=lo,
            ci_high=hi,
            level=level,
        )
    return results
