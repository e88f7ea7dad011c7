"""Score aggregation and ranking over stored annotations.

All arithmetic is exact (integer rationals), so results are independent of
summation order and safe to parallelize.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rubric import SentenceScore, final_score
from .store import Campaign, UnknownEngine


@dataclass
class ScoreMatrix:
    """One judge's exact sentence scores, keyed by (sentence_index, engine_id)."""

    judge_id: str
    entries: dict[tuple[int, str], SentenceScore]


@dataclass
class RankTable:
    """Per-sentence competition ranks over an engine subset (1 = best; ties
    share the minimum rank, and the rank after a tie block of size t skips
    t - 1 values).  ``excluded`` lists sentences lacking full engine coverage."""

    judge_id: str
    engine_subset: list[str]
    per_sentence: dict[int, dict[str, int]]
    excluded: list[int] = field(default_factory=list)


def score_matrix(campaign: Campaign, judge_id: str) -> ScoreMatrix:
    campaign.require_judge(judge_id)
    entries = {
        (s, e): final_score(rec.vector)
        for (j, s, e), rec in campaign.annotations.items()
        if j == judge_id
    }
    return ScoreMatrix(judge_id=judge_id, entries=entries)


def document_scores(
    matrix: ScoreMatrix, campaign: Campaign
) -> dict[tuple[int, str], Fraction]:
    """Mean score per (document, engine) over that document's annotated
    sentences; a cell with no annotations is absent, never zero."""
    sums: dict[tuple[int, str], Fraction] = {}
    counts: dict[tuple[int, str], int] = {}
    for (sentence_index, engine_id), score in matrix.entries.items():
        doc = campaign.sentences[sentence_index].document_id
        key = (doc, engine_id)
        sums[key] = sums.get(key, Fraction(0)) + score.value
        counts[key] = counts.get(key, 0) + 1
    return {key: sums[key] / counts[key] for key in sums}


def system_scores(matrix: ScoreMatrix, campaign: Campaign) -> dict[str, Fraction]:
    """Mean score per engine over all annotated sentences."""
    sums: dict[str, Fraction] = {}
    counts: dict[str, int] = {}
    for (_, engine_id), score in matrix.entries.items():
        sums[engine_id] = sums.get(engine_id, Fraction(0)) + score.value
        counts[engine_id] = counts.get(engine_id, 0) + 1
    return {eid: sums[eid] / counts[eid] for eid in sums}


def competition_ranks(scores: dict[str, Fraction]) -> dict[str, int]:
    """Rank by descending score; ties share the minimum rank ("1, 1, 3")."""
    ordered = sorted(scores.items(), key=lambda kv: kv[1], reverse=True)
    ranks: dict[str, int] = {}
    for position, (eid, value) in enumerate(ordered, start=1):
        if position > 1 and value == ordered[position - 2][1]:
            ranks[eid] = ranks[ordered[position - 2][0]]
        else:
            ranks[eid] = position
    return ranks


def rank_sentences(matrix: ScoreMatrix, engine_subset: list[str]) -> RankTable:
    """Competition ranks per sentence over the subset.  Sentences not
    annotated for every subset engine are excluded and reported."""
    if not engine_subset:
        raise UnknownEngine("<empty subset>")
    sentences = sorted({s for (s, _) in matrix.entries})
    per_sentence: dict[int, dict[str, int]] = {}
    excluded: list[int] = []
    for s in sentences:
        scores = {}
        complete = True
        for eid in engine_subset:
            entry = matrix.entries.get((s, eid))
            if entry is None:
                complete = False
                break
            scores[eid] = entry.value
        if complete:
            per_sentence[s] = competition_ranks(scores)
        else:
            excluded.append(s)
    return RankTable(
        judge_id=matrix.judge_id,
        engine_subset=list(engine_subset),
        per_sentence=per_sentence,
        excluded=excluded,
    )


def credited_engine(ranks: dict[str, int], engine_subset: list[str]) -> str:
    """The single engine credited as best for a sentence: rank 1, ties broken
    by subset (registry) order, earliest wins."""
    for eid in engine_subset:
        if ranks[eid] == 1:
            return eid
    raise ValueError("rank table row has no rank-1 engine")


def highest_rank_counts(rank_table: RankTable) -> dict[str, int]:
    """Per engine, the number of sentences it is credited as best for.
    Counts sum to the number of ranked sentences."""
    counts = {eid: 0 for eid in rank_table.engine_subset}
    for ranks in rank_table.per_sentence.values():
        counts[credited_engine(ranks, rank_table.engine_subset)] += 1
    return counts


def subset_view(campaign: Campaign, engine_ids: list[str]) -> Campaign:
    """Campaign restricted to an engine subset; ranks recomputed within it."""
    return campaign.restrict(engine_ids)
