"""Synthetic annotation generation for exercising the reporting pipeline.

Profiles:
  identical            judge 2..n copy judge 1's vectors exactly
  independent-uniform  every judge draws feature levels independently
  perturb:p,d          judge 2..n copy judge 1, flipping each feature by
                       +/- d with probability p (clipped to 0..4)

Per-engine quality offsets shift every sampled level before clipping, which
lets a known system-score ordering be injected and then recovered in reports.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Optional

from .rubric import FEATURE_COUNT, MAX_LEVEL, MIN_LEVEL, validate_vector
from .store import Campaign, StoreError


@dataclass(frozen=True)
class Profile:
    kind: str  # "identical" | "independent-uniform" | "perturb"
    flip_probability: float = 0.0
    flip_delta: int = 1

    @classmethod
    def parse(cls, text: str) -> "Profile":
        if text in ("identical", "independent-uniform"):
            return cls(kind=text)
        m = re.fullmatch(r"perturb:([0-9.]+),([0-9]+)", text)
        if m:
            p = float(m.group(1))
            if not 0.0 <= p <= 1.0:
                raise StoreError(f"perturb probability {p} not in [0, 1]")
            return cls(kind="perturb", flip_probability=p, flip_delta=int(m.group(2)))
        raise StoreError(f"unknown noise profile {text!r}")


@dataclass
class SimulatedAnnotation:
    judge_id: str
    sentence_index: int
    engine_id: str
    scores: list[Optional[int]]


@dataclass
class SimulationResult:
    seed: int
    profile: Profile
    annotations: list[SimulatedAnnotation] = field(default_factory=list)


def _clip(level: int) -> int:
    return max(MIN_LEVEL, min(MAX_LEVEL, level))


def _base_vector(rng: random.Random, offset: int, na_rate: float) -> list[Optional[int]]:
    while True:
        scores: list[Optional[int]] = []
        for _ in range(FEATURE_COUNT):
            if na_rate and rng.random() < na_rate:
                scores.append(None)
            else:
                scores.append(_clip(rng.randint(MIN_LEVEL, MAX_LEVEL) + offset))
        if any(s is not None for s in scores):
            return scores


def _perturbed(
    rng: random.Random, base: list[Optional[int]], p: float, delta: int
) -> list[Optional[int]]:
    out: list[Optional[int]] = []
    for s in base:
        if s is None or rng.random() >= p:
            out.append(s)
        else:
            out.append(_clip(s + rng.choice((-delta, delta))))
    return out


def simulate_annotations(
    campaign: Campaign,
    judge_ids: list[str],
    profile: Profile,
    seed: int,
    engine_offsets: Optional[dict[str, int]] = None,
    na_rate: float = 0.0,
) -> SimulationResult:
    """Draw one vector per (judge, sentence, engine).  Deterministic in the
    seed; offsets apply per engine before clipping."""
    offsets = engine_offsets or {}
    for eid in offsets:
        campaign.require_engine(eid)
    rng = random.Random(seed)
    result = SimulationResult(seed=seed, profile=profile)
    for sentence in campaign.sentences:
        for engine in campaign.engines:
            offset = offsets.get(engine.id, 0)
            base = _base_vector(rng, offset, na_rate)
            for i, judge_id in enumerate(judge_ids):
                if i == 0 or profile.kind == "identical":
                    scores = list(base)
                elif profile.kind == "independent-uniform":
                    scores = _base_vector(rng, offset, na_rate)
                else:  # perturb
                    scores = _perturbed(
                        rng, base, profile.flip_probability, profile.flip_delta
                    )
                    if all(s is None for s in scores):
                        scores = list(base)
                result.annotations.append(
                    SimulatedAnnotation(
                        judge_id=judge_id,
                        sentence_index=sentence.index,
                        engine_id=engine.id,
                        scores=scores,
                    )
                )
    return result


def apply_simulation(campaign: Campaign, result: SimulationResult) -> int:
    """Register missing judges and record every simulated annotation."""
    for ann in result.annotations:
        if ann.judge_id not in campaign.judges:
            campaign.add_judge(ann.judge_id, judge_id=ann.judge_id)
        campaign.record_annotation(
            ann.judge_id,
            ann.sentence_index,
            ann.engine_id,
            validate_vector(ann.scores),
        )
    return len(result.annotations)
