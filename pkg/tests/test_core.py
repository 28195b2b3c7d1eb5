import pytest
from hypothesis import given, strategies as st

from temprel.core import (
    EventPhrase,
    Comparator,
    Label,
    Relation,
    TemporalUnit,
    bucket_of_seconds,
    parse_unit_token,
    unit_token,
)

# Independent threshold-table oracle: (bucket index, inclusive lower bound,
# exclusive upper bound) in seconds, written out from the declared boundaries.
BUCKET_TABLE = [
    (0, 0, 3_600),
    (1, 3_600, 86_400),
    (2, 86_400, 604_800),
    (3, 604_800, 2_592_000),
    (4, 2_592_000, 31_536_000),
    (5, 31_536_000, 315_360_000),
    (6, 315_360_000, float("inf")),
]


def bucket_oracle(seconds):
    for index, lo, hi in BUCKET_TABLE:
        if lo <= seconds < hi:
            return index
    raise AssertionError


def test_bucket_zero_is_minutes():
    assert bucket_of_seconds(0) is TemporalUnit.MINUTES


def test_bucket_eight_days_is_weeks():
    # the Jan 2 -> Jan 10 gap maps to the weeks bucket
    assert bucket_of_seconds(8 * 86_400) is TemporalUnit.WEEKS


def test_bucket_5000_days_is_decades():
    seconds = 5_000 * 86_400
    assert bucket_oracle(seconds) == 6
    assert bucket_of_seconds(seconds) is TemporalUnit.DECADES


@pytest.mark.parametrize("index,lo,hi", BUCKET_TABLE)
def test_bucket_matches_oracle_at_boundaries(index, lo, hi):
    assert int(bucket_of_seconds(lo)) == index
    if hi != float("inf"):
        assert int(bucket_of_seconds(hi - 1)) == index
        assert int(bucket_of_seconds(hi)) == index + 1


def test_bucket_rejects_negative():
    with pytest.raises(ValueError):
        bucket_of_seconds(-1)


@given(st.integers(min_value=0, max_value=10**12))
def test_bucket_matches_oracle(seconds):
    assert int(bucket_of_seconds(seconds)) == bucket_oracle(seconds)


@given(
    st.integers(min_value=0, max_value=10**12),
    st.integers(min_value=0, max_value=10**12),
)
def test_bucket_monotone(a, b):
    lo, hi = sorted((a, b))
    assert bucket_of_seconds(lo) <= bucket_of_seconds(hi)


def test_unit_scale_has_exactly_seven_ordered_values():
    units = list(TemporalUnit)
    assert len(units) == 7
    assert [int(u) for u in units] == list(range(7))
    assert units[0].display == "≤minutes"
    assert units[-1].display == "≥decades"


def test_unit_tokens():
    assert unit_token(TemporalUnit.MINUTES) == "[extra_id_0]"
    assert unit_token(TemporalUnit.DECADES) == "[extra_id_6]"
    assert parse_unit_token("[extra_id_3]") is TemporalUnit.WEEKS


@pytest.mark.parametrize("unit", list(TemporalUnit))
def test_unit_token_round_trip(unit):
    assert parse_unit_token(unit_token(unit)) is unit


@pytest.mark.parametrize(
    "bad", ["", "extra_id_0", "[extra_id_7]", "[extra_id_]", "[extra_id_00]", "[V]"]
)
def test_parse_unit_token_no_match(bad):
    assert parse_unit_token(bad) is None


def test_unit_from_name_accepts_decorated_forms():
    assert TemporalUnit.from_name("weeks") is TemporalUnit.WEEKS
    assert TemporalUnit.from_name("≤minutes") is TemporalUnit.MINUTES
    assert TemporalUnit.from_name("≥decades") is TemporalUnit.DECADES
    with pytest.raises(ValueError):
        TemporalUnit.from_name("fortnights")


def test_relation_flip_is_involution():
    for rel in Relation:
        assert rel.flip().flip() is rel
    assert Relation.BEFORE.flip() is Relation.AFTER


def test_enums_have_exactly_two_values():
    assert {c.value for c in Comparator} == {"start", "end"}
    assert {l.value for l in Label} == {"entailment", "contradiction"}


def test_event_phrase_validation():
    phrase = EventPhrase(("took", "the", "bus"), 0)
    assert phrase.text == "took the bus"
    with pytest.raises(ValueError):
        EventPhrase((), 0)
    with pytest.raises(ValueError):
        EventPhrase(("ate",), 1)


def test_event_phrase_from_text():
    phrase = EventPhrase.from_text("went to the park")
    assert phrase.tokens == ("went", "to", "the", "park")
    assert phrase.verb_index == 0
