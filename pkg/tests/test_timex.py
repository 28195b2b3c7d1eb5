import pytest
from hypothesis import given, strategies as st

from temprel.core import Relation, TemporalUnit
from temprel.timex import (
    PartialTimestamp,
    distance_between,
    inherit,
    parse_temporal_expression,
    resolve,
)


def parse(text):
    return parse_temporal_expression(text.split())


class TestParsing:
    def test_month_day(self):
        ts = parse("January 2nd")
        assert (ts.month, ts.day) == (1, 2)
        assert ts.source_span == (0, 2)

    def test_bare_day_ordinal(self):
        ts = parse("the 10th")
        assert ts.day == 10
        assert (ts.year, ts.month) == (None, None)
        assert ts.source_span == (0, 2)

    def test_no_match(self):
        assert parse("very soon") is None

    def test_span_is_exact_inside_context(self):
        ts = parse("I went there on January 2nd with friends")
        assert (ts.month, ts.day) == (1, 2)
        assert ts.source_span == (4, 6)

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("January 2", {"month": 1, "day": 2}),
            ("January 2 , 2020", {"month": 1, "day": 2, "year": 2020}),
            ("January 2nd 2020", {"month": 1, "day": 2, "year": 2020}),
            ("January 1999", {"month": 1, "year": 1999}),
            ("Oct 2020", {"month": 10, "year": 2020}),
            ("1999", {"year": 1999}),
            ("3 pm", {"hour": 15}),
            ("3pm", {"hour": 15}),
            ("12 am", {"hour": 0}),
            ("12 pm", {"hour": 12}),
            ("14:30", {"hour": 14, "minute": 30}),
            ("3:45 pm", {"hour": 15, "minute": 45}),
        ],
    )
    def test_inventory(self, text, expected):
        ts = parse(text)
        assert ts is not None, text
        for field in ("year", "month", "day", "hour", "minute"):
            assert getattr(ts, field) == expected.get(field), (text, field)

    @pytest.mark.parametrize(
        "text",
        ["soon after dinner", "nice weather", "the 32nd", "25:30", "456", "99999"],
    )
    def test_unrecognized_is_no_match(self, text):
        assert parse(text) is None

    def test_earliest_match_wins(self):
        ts = parse("in 1999 on January 2nd")
        assert ts.year == 1999
        assert ts.source_span == (1, 2)


class TestInherit:
    def test_fills_coarser_month(self):
        prev = PartialTimestamp(month=1, day=2)
        cur = PartialTimestamp(day=10)
        merged = inherit(prev, cur)
        assert (merged.month, merged.day) == (1, 10)

    def test_current_overrides(self):
        merged = inherit(PartialTimestamp(year=1999), PartialTimestamp(year=2001))
        assert merged.year == 2001

    def test_fills_only_coarser_fields(self):
        # previous day is finer than current's finest (month): not copied
        merged = inherit(PartialTimestamp(month=5), PartialTimestamp(day=3))
        assert (merged.month, merged.day) == (5, 3)
        merged = inherit(PartialTimestamp(year=2000, day=7), PartialTimestamp(month=4))
        assert (merged.year, merged.month, merged.day) == (2000, 4, None)

    def test_idempotent_when_current_complete(self):
        prev = PartialTimestamp(year=2000, month=1)
        cur = PartialTimestamp(year=2005, month=6, day=2)
        assert inherit(prev, cur) == cur

    def test_keeps_source_span(self):
        prev = PartialTimestamp(month=1, source_span=(0, 1))
        cur = PartialTimestamp(day=9, source_span=(4, 6))
        assert inherit(prev, cur).source_span == (4, 6)


class TestResolve:
    def test_deterministic_defaulting(self):
        a = resolve(PartialTimestamp(month=1, day=2))
        b = resolve(PartialTimestamp(month=1, day=2))
        assert a == b
        assert a.resolution == "day"

    def test_invalid_calendar_date(self):
        assert resolve(PartialTimestamp(month=2, day=31)) is None

    def test_sentinel_keeps_leap_day(self):
        assert resolve(PartialTimestamp(month=2, day=29)) is not None


class TestDistance:
    def test_fig4_style_pair_is_weeks(self):
        a = PartialTimestamp(month=1, day=2)
        b = PartialTimestamp(month=1, day=10)
        assert distance_between(a, b) == (Relation.BEFORE, TemporalUnit.WEEKS)

    def test_tie_reports_before_minutes(self):
        ts = PartialTimestamp(month=3, day=14)
        assert distance_between(ts, ts) == (Relation.BEFORE, TemporalUnit.MINUTES)

    def test_year_gap_is_decades(self):
        # 15 years clears the 3650-day decade threshold
        a = PartialTimestamp(year=1990)
        b = PartialTimestamp(year=2005)
        assert distance_between(a, b) == (Relation.BEFORE, TemporalUnit.DECADES)

    def test_mixed_year_presence_not_comparable(self):
        a = PartialTimestamp(year=2005, month=1, day=1)
        b = PartialTimestamp(month=1, day=10)
        assert distance_between(a, b) is None
        assert distance_between(b, a) is None

    def test_hours_bucket(self):
        a = PartialTimestamp(hour=9)
        b = PartialTimestamp(hour=15)
        assert distance_between(a, b) == (Relation.BEFORE, TemporalUnit.HOURS)

    def test_reverse_flips_order_keeps_bucket(self):
        a = PartialTimestamp(month=1, day=2)
        b = PartialTimestamp(month=1, day=10)
        assert distance_between(b, a) == (Relation.AFTER, TemporalUnit.WEEKS)


timestamps = st.builds(
    PartialTimestamp,
    year=st.one_of(st.none(), st.integers(1900, 2099)),
    month=st.integers(1, 12),
    day=st.integers(1, 28),
    hour=st.integers(0, 23),
    minute=st.integers(0, 59),
)


@given(timestamps, timestamps)
def test_distance_antisymmetry(a, b):
    forward = distance_between(a, b)
    backward = distance_between(b, a)
    if forward is None:
        assert backward is None
        return
    assert backward[1] is forward[1]
    if resolve(a).seconds == resolve(b).seconds:
        assert forward[0] is Relation.BEFORE and backward[0] is Relation.BEFORE
    else:
        assert backward[0] is forward[0].flip()


@given(timestamps, timestamps)
def test_inherit_result_is_valid_and_keeps_current_fields(prev, cur):
    merged = inherit(prev, cur)
    for field in ("year", "month", "day", "hour", "minute"):
        if getattr(cur, field) is not None:
            assert getattr(merged, field) == getattr(cur, field)
