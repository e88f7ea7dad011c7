import random
from fractions import Fraction

from heval import analytics
from heval.fixtures import REFERENCE_VECTORS
from heval.rubric import final_score, validate_vector
from heval.store import build_campaign

ENGINES = ["E1", "E2", "E3", "E4", "E5"]


def campaign_with(n, engines=ENGINES, document_size=100, seed=0):
    source = [f"s{i}" for i in range(n)]
    outputs = {e: [f"{e}-{i}" for i in range(n)] for e in engines}
    return build_campaign(source, outputs, document_size=document_size, rng_seed=seed)


def reference_campaign():
    """One-sentence campaign holding the bundled two-judge reference vectors."""
    c = campaign_with(1)
    for j in ("Human1", "Human2"):
        c.add_judge(j, judge_id=j)
    for (engine, judge), raw in REFERENCE_VECTORS.items():
        c.record_annotation(judge, 0, engine, validate_vector(raw))
    return c


def randomly_annotated(n, judges=("J1", "J2"), seed=0, engines=ENGINES):
    c = campaign_with(n, engines=engines)
    rng = random.Random(seed)
    for j in judges:
        c.add_judge(j, judge_id=j)
        for s in range(n):
            for e in engines:
                c.record_annotation(
                    j, s, e, validate_vector([rng.randint(0, 4) for _ in range(11)])
                )
    return c


def test_score_matrix_reference_values():
    c = reference_campaign()
    m = analytics.score_matrix(c, "Human1")
    values = {e: m.entries[(0, e)].value for e in ENGINES}
    assert values == {
        "E1": Fraction(32, 40),
        "E2": Fraction(37, 40),
        "E3": Fraction(14, 40),
        "E4": Fraction(12, 40),
        "E5": Fraction(16, 40),
    }


def test_score_matrix_empty_without_annotations():
    c = campaign_with(3)
    c.add_judge("j", judge_id="J1")
    assert analytics.score_matrix(c, "J1").entries == {}


def test_score_matrix_matches_direct_recomputation():
    c = randomly_annotated(2, judges=("J1",), engines=["E1", "E2", "E3"])
    m = analytics.score_matrix(c, "J1")
    for (s, e), score in m.entries.items():
        raw = c.annotations[("J1", s, e)].vector.scores
        applicable = [x for x in raw if x is not None]
        assert score.value == Fraction(sum(applicable), 4 * len(applicable))


def test_document_scores_basic():
    c = campaign_with(2, engines=["E1"], document_size=2)
    c.add_judge("j", judge_id="J1")
    c.record_annotation("J1", 0, "E1", validate_vector([2] * 11))  # 0.5
    c.record_annotation("J1", 1, "E1", validate_vector([3, 3, 3, 3, 3, 3, 2, 3, 3, 3, 2]))
    m = analytics.score_matrix(c, "J1")
    scores = analytics.document_scores(m, c)
    assert scores[(0, "E1")] == (Fraction(1, 2) + Fraction(31, 44)) / 2


def test_document_scores_skip_missing():
    c = campaign_with(2, engines=["E1"], document_size=2)
    c.add_judge("j", judge_id="J1")
    c.record_annotation("J1", 0, "E1", validate_vector([4, 4, 4, 4, 4, 4, 4, 4, 0, 0, 0]))
    m = analytics.score_matrix(c, "J1")
    scores = analytics.document_scores(m, c)
    # only annotated sentence contributes; unannotated cell absent, not zero
    assert scores == {(0, "E1"): Fraction(32, 44)}


def test_document_scores_against_brute_force():
    c = randomly_annotated(100, judges=("J1",), engines=["E1", "E2"])
    m = analytics.score_matrix(c, "J1")
    scores = analytics.document_scores(m, c)
    for e in ("E1", "E2"):
        total = sum(m.entries[(s, e)].value for s in range(100))
        assert scores[(0, e)] == total / 100


def test_system_scores_single_and_uniform():
    c = campaign_with(3, engines=["E1"])
    c.add_judge("j", judge_id="J1")
    for s in range(3):
        c.record_annotation("J1", s, "E1", validate_vector([3] * 11))
    m = analytics.score_matrix(c, "J1")
    assert analytics.system_scores(m, c) == {"E1": Fraction(3, 4)}


def test_system_scores_against_brute_force():
    c = randomly_annotated(130, judges=("J1",))
    m = analytics.score_matrix(c, "J1")
    scores = analytics.system_scores(m, c)
    for e in ENGINES:
        vals = [m.entries[(s, e)].value for s in range(130)]
        assert scores[e] == sum(vals) / len(vals)


def test_rank_sentences_reference_case():
    c = reference_campaign()
    m = analytics.score_matrix(c, "Human1")
    table = analytics.rank_sentences(m, ENGINES)
    assert table.per_sentence[0] == {"E1": 2, "E2": 1, "E3": 4, "E4": 5, "E5": 3}
    assert table.excluded == []


def test_rank_sentences_total_tie():
    c = campaign_with(1)
    c.add_judge("j", judge_id="J1")
    for e in ENGINES:
        c.record_annotation("J1", 0, e, validate_vector([2] * 11))
    table = analytics.rank_sentences(analytics.score_matrix(c, "J1"), ENGINES)
    assert table.per_sentence[0] == {e: 1 for e in ENGINES}


def test_competition_ranking_skips_after_tie():
    ranks = analytics.competition_ranks(
        {"A": Fraction(9, 10), "B": Fraction(9, 10), "C": Fraction(1, 2)}
    )
    assert ranks == {"A": 1, "B": 1, "C": 3}


def test_rank_sentences_excludes_partial_coverage():
    c = campaign_with(2, engines=["E1", "E2"])
    c.add_judge("j", judge_id="J1")
    c.record_annotation("J1", 0, "E1", validate_vector([3] * 11))
    c.record_annotation("J1", 0, "E2", validate_vector([2] * 11))
    c.record_annotation("J1", 1, "E1", validate_vector([3] * 11))
    table = analytics.rank_sentences(analytics.score_matrix(c, "J1"), ["E1", "E2"])
    assert list(table.per_sentence) == [0]
    assert table.excluded == [1]


def test_highest_rank_counts_strict_winner():
    c = campaign_with(3)
    c.add_judge("j", judge_id="J1")
    for s in range(3):
        for e in ENGINES:
            level = 4 if e == "E2" else 1
            c.record_annotation("J1", s, e, validate_vector([level] * 11))
    table = analytics.rank_sentences(analytics.score_matrix(c, "J1"), ENGINES)
    counts = analytics.highest_rank_counts(table)
    assert counts == {"E1": 0, "E2": 3, "E3": 0, "E4": 0, "E5": 0}


def test_highest_rank_tie_credits_registry_order():
    c = campaign_with(1)
    c.add_judge("j", judge_id="J1")
    for e in ENGINES:
        level = 4 if e in ("E1", "E2") else 1
        c.record_annotation("J1", 0, e, validate_vector([level] * 11))
    table = analytics.rank_sentences(analytics.score_matrix(c, "J1"), ENGINES)
    assert analytics.highest_rank_counts(table) == {
        "E1": 1, "E2": 0, "E3": 0, "E4": 0, "E5": 0,
    }


def test_highest_rank_counts_against_brute_force():
    c = randomly_annotated(200, judges=("J1",), seed=9)
    m = analytics.score_matrix(c, "J1")
    table = analytics.rank_sentences(m, ENGINES)
    counts = analytics.highest_rank_counts(table)
    assert sum(counts.values()) == 200
    brute = {e: 0 for e in ENGINES}
    for s in range(200):
        best = max(m.entries[(s, e)].value for e in ENGINES)
        for e in ENGINES:  # registry order, earliest wins
            if m.entries[(s, e)].value == best:
                brute[e] += 1
                break
    assert counts == brute


def test_subset_view_reference_case():
    c = reference_campaign()
    view = analytics.subset_view(c, ["E3", "E4", "E5"])
    m = analytics.score_matrix(view, "Human1")
    table = analytics.rank_sentences(m, view.engine_ids)
    assert table.per_sentence[0] == {"E3": 2, "E4": 3, "E5": 1}


def test_subset_of_one_engine_takes_all_credit():
    c = randomly_annotated(10, judges=("J1",))
    view = analytics.subset_view(c, ["E4"])
    table = analytics.rank_sentences(
        analytics.score_matrix(view, "J1"), view.engine_ids
    )
    assert analytics.highest_rank_counts(table) == {"E4": 10}


def test_subset_conservation_and_relative_order():
    c = randomly_annotated(100, judges=("J1",), seed=13)
    full = analytics.rank_sentences(analytics.score_matrix(c, "J1"), ENGINES)
    view = analytics.subset_view(c, ["E3", "E4", "E5"])
    sub = analytics.rank_sentences(
        analytics.score_matrix(view, "J1"), view.engine_ids
    )
    assert sum(analytics.highest_rank_counts(sub).values()) == 100
    for s in range(100):
        for a in ("E3", "E4", "E5"):
            for b in ("E3", "E4", "E5"):
                full_lt = full.per_sentence[s][a] < full.per_sentence[s][b]
                sub_lt = sub.per_sentence[s][a] < sub.per_sentence[s][b]
                assert full_lt == sub_lt
