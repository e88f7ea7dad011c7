import pytest
from fractions import Fraction

from hypothesis import given, strategies as st

from heval.rubric import (
    AllNotApplicable,
    FEATURES,
    LengthMismatch,
    OutOfRange,
    final_score,
    format_score,
    round_half_up,
    scale_label,
    validate_vector,
)

NA = None

E1_H1 = [3, 4, 4, NA, 3, 2, 3, 4, 3, 3, 3]


def test_feature_registry():
    assert len(FEATURES) == 11
    assert [f.ordinal for f in FEATURES] == list(range(1, 12))
    assert len({f.short_name for f in FEATURES}) == 11


def test_validate_accepts_reference_vector():
    v = validate_vector(E1_H1)
    assert v.applicable_count == 10


def test_validate_accepts_all_maximum():
    assert validate_vector([4] * 11).applicable_count == 11


def test_validate_rejects_all_na():
    with pytest.raises(AllNotApplicable):
        validate_vector([NA] * 11)


def test_validate_rejects_out_of_range():
    with pytest.raises(OutOfRange) as exc:
        validate_vector([3, 4, 5, NA, 3, 2, 3, 4, 3, 3, 3])
    assert exc.value.ordinal == 3
    assert exc.value.value == 5


def test_validate_rejects_wrong_length():
    with pytest.raises(LengthMismatch):
        validate_vector([3] * 10)
    with pytest.raises(LengthMismatch):
        validate_vector([3] * 12)


@pytest.mark.parametrize(
    "raw,expected",
    [
        (E1_H1, Fraction(32, 40)),
        ([4, 4, 4, NA, 4, 4, 4, 4, 4, 3, 3], Fraction(38, 40)),
        ([2, 0, 0, NA, 1, 0, 1, 3, 1, 0, 1], Fraction(9, 40)),
        ([0] * 11, Fraction(0)),
        ([4] * 11, Fraction(1)),
    ],
)
def test_final_score_reference_cases(raw, expected):
    assert final_score(validate_vector(raw)).value == expected


def test_final_score_excludes_na_from_both_sides():
    with_na = final_score(validate_vector([3, NA, NA, NA, 3, 3, NA, 3, 3, 3, 3]))
    assert with_na.applicable_count == 7
    assert with_na.value == Fraction(3, 4)


@pytest.mark.parametrize(
    "level,label",
    [
        (4, "Ideal"),
        (3, "Perfect"),
        (2, "Acceptable"),
        (1, "Partially Acceptable"),
        (0, "Not Acceptable"),
    ],
)
def test_scale_labels(level, label):
    assert scale_label(level) == label


def test_scale_label_rejects_out_of_scale():
    with pytest.raises(OutOfRange):
        scale_label(5)
    with pytest.raises(OutOfRange):
        scale_label(-1)


def test_presentation_rounding_is_half_up():
    assert str(round_half_up(Fraction(29, 40))) == "0.73"  # 0.725
    assert str(round_half_up(Fraction(9, 40))) == "0.23"  # 0.225
    assert format_score(Fraction(32, 40)) == "0.8000"


# property strategies: valid vectors with at least one applicable feature

levels = st.integers(min_value=0, max_value=4)
slots = st.one_of(st.none(), levels)
vectors = st.lists(slots, min_size=11, max_size=11).filter(
    lambda raw: any(s is not None for s in raw)
)


@given(vectors)
def test_score_bounds(raw):
    value = final_score(validate_vector(raw)).value
    assert 0 <= value <= 1
    applicable = [s for s in raw if s is not None]
    assert (value == 0) == all(s == 0 for s in applicable)
    assert (value == 1) == all(s == 4 for s in applicable)


@given(vectors, st.data())
def test_single_feature_monotonicity(raw, data):
    raisable = [i for i, s in enumerate(raw) if s is not None and s < 4]
    if not raisable:
        return
    i = data.draw(st.sampled_from(raisable))
    bumped = list(raw)
    bumped[i] += 1
    assert final_score(validate_vector(bumped)).value > final_score(
        validate_vector(raw)
    ).value


@given(st.integers(min_value=0, max_value=4), st.sets(st.integers(0, 10), max_size=10))
def test_na_neutrality(level, na_positions):
    raw = [NA if i in na_positions else level for i in range(11)]
    assert final_score(validate_vector(raw)).value == Fraction(level, 4)


@given(vectors)
def test_determinism(raw):
    a = final_score(validate_vector(raw))
    b = final_score(validate_vector(list(raw)))
    assert a == b and a.value == b.value
