"""Temporal-expression machinery: rule-based parsing of explicit time mentions,
field inheritance from earlier mentions, and bucketed distances between
expressions.

The recognized-expression inventory is fixed: month-name + day ("January 2nd",
"January 2"), optionally followed by a year; bare day ordinals ("the 10th",
"10th"); month-name + 4-digit year; bare 4-digit years; and clock times
("3 pm", "3:45 pm", "14:30", "3pm"). Anything else is a no-match, never an
error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from datetime import datetime
from typing import Optional, Sequence

from .core import Relation, TemporalUnit, bucket_of_seconds

__all__ = [
    "PartialTimestamp",
    "ResolvedInstant",
    "parse_temporal_expression",
    "inherit",
    "resolve",
    "distance_between",
    "SENTINEL_YEAR",
    "EPOCH",
]

# Year used to make year-less timestamps subtractable. Pairs are comparable
# only when both carry it or neither does; it is a leap year so Feb 29 resolves.
SENTINEL_YEAR = 2000

EPOCH = datetime(1970, 1, 1)

# Coarsest first; inheritance fills absent fields strictly coarser than the
# finest field the current mention states.
_FIELDS = ("year", "month", "day", "hour", "minute")

_FIELD_RANGES = {
    "year": (1, 9999),
    "month": (1, 12),
    "day": (1, 31),
    "hour": (0, 23),
    "minute": (0, 59),
}


@dataclass(frozen=True)
class PartialTimestamp:
    """A possibly incomplete calendar/clock reading of one time mention."""

    year: Optional[int] = None
    month: Optional[int] = None
    day: Optional[int] = None
    hour: Optional[int] = None
    minute: Optional[int] = None
    source_span: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if all(getattr(self, f) is None for f in _FIELDS):
            raise ValueError("timestamp must have at least one field")
        for field, (lo, hi) in _FIELD_RANGES.items():
            value = getattr(self, field)
            if value is not None and not lo <= value <= hi:
                raise ValueError(f"{field}={value} outside [{lo}, {hi}]")

    def present_fields(self) -> tuple[str, ...]:
        return tuple(f for f in _FIELDS if getattr(self, f) is not None)

    def finest_field(self) -> str:
        present = self.present_fields()
        return present[-1]


@dataclass(frozen=True)
class ResolvedInstant:
    """A fully defaulted timestamp as seconds relative to the fixed epoch."""

    seconds: int
    resolution: str  # finest field that was explicitly present


_MONTHS = {
    "january": 1, "february": 2, "march": 3, "april": 4, "may": 5,
    "june": 6, "july": 7, "august": 8, "september": 9, "october": 10,
    "november": 11, "december": 12,
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "jun": 6, "jul": 7,
    "aug": 8, "sep": 9, "sept": 9, "oct": 10, "nov": 11, "dec": 12,
}

_ORDINAL_RE = re.compile(r"^(\d{1,2})(st|nd|rd|th)$", re.IGNORECASE)
_CLOCK_RE = re.compile(r"^(\d{1,2}):(\d{2})$")
_COMPACT_MERIDIEM_RE = re.compile(r"^(\d{1,2})(am|pm)$", re.IGNORECASE)


def _day_number(token: str) -> Optional[int]:
    match = _ORDINAL_RE.match(token)
    if match:
        day = int(match.group(1))
        return day if 1 <= day <= 31 else None
    if token.isdigit() and len(token) <= 2:
        day = int(token)
        return day if 1 <= day <= 31 else None
    return None


def _year_number(token: str) -> Optional[int]:
    if len(token) == 4 and token.isdigit():
        year = int(token)
        if 1000 <= year <= 2999:
            return year
    return None


def _apply_meridiem(hour: int, meridiem: str) -> Optional[int]:
    if not 1 <= hour <= 12:
        return None
    if meridiem == "am":
        return 0 if hour == 12 else hour
    return 12 if hour == 12 else hour + 12


def _match_at(tokens: Sequence[str], i: int) -> Optional[tuple[dict, int]]:
    """Try every pattern anchored at token i; return (fields, span length)."""
    tok = tokens[i]
    low = tok.lower()

    month = _MONTHS.get(low)
    if month is not None and i + 1 < len(tokens):
        day = _day_number(tokens[i + 1])
        if day is not None:
            # month day [,] year
            j = i + 2
            if j < len(tokens) and tokens[j] == ",":
                j += 1
            if j < len(tokens):
                year = _year_number(tokens[j])
                if year is not None:
                    return {"month": month, "day": day, "year": year}, j + 1 - i
            return {"month": month, "day": day}, 2
        year = _year_number(tokens[i + 1])
        if year is not None:
            return {"month": month, "year": year}, 2

    # "the 10th" / bare ordinal
    if low == "the" and i + 1 < len(tokens):
        match = _ORDINAL_RE.match(tokens[i + 1])
        if match and 1 <= int(match.group(1)) <= 31:
            return {"day": int(match.group(1))}, 2
    match = _ORDINAL_RE.match(tok)
    if match and 1 <= int(match.group(1)) <= 31:
        return {"day": int(match.group(1))}, 1

    # clock times
    clock = _CLOCK_RE.match(tok)
    if clock:
        hour, minute = int(clock.group(1)), int(clock.group(2))
        if minute <= 59:
            if i + 1 < len(tokens) and tokens[i + 1].lower() in ("am", "pm"):
                adjusted = _apply_meridiem(hour, tokens[i + 1].lower())
                if adjusted is not None:
                    return {"hour": adjusted, "minute": minute}, 2
            if hour <= 23:
                return {"hour": hour, "minute": minute}, 1
    if tok.isdigit() and len(tok) <= 2 and i + 1 < len(tokens):
        nxt = tokens[i + 1].lower()
        if nxt in ("am", "pm"):
            adjusted = _apply_meridiem(int(tok), nxt)
            if adjusted is not None:
                return {"hour": adjusted}, 2
    compact = _COMPACT_MERIDIEM_RE.match(tok)
    if compact:
        adjusted = _apply_meridiem(int(compact.group(1)), compact.group(2).lower())
        if adjusted is not None:
            return {"hour": adjusted}, 1

    # bare 4-digit year
    year = _year_number(tok)
    if year is not None:
        return {"year": year}, 1

    return None


def parse_temporal_expression(tokens: Sequence[str]) -> Optional[PartialTimestamp]:
    """Find the first direct time mention in a token sequence.

    Returns a PartialTimestamp whose source_span is the exact half-open token
    range matched, or None when nothing in the inventory matches.
    """
    for i in range(len(tokens)):
        hit = _match_at(tokens, i)
        if hit is not None:
            fields, length = hit
            return PartialTimestamp(source_span=(i, i + length), **fields)
    return None


def inherit(previous: PartialTimestamp, current: PartialTimestamp) -> PartialTimestamp:
    """Fill current's unmentioned coarse fields from the nearest previous mention.

    Only fields coarser than current's finest stated field are inherited;
    finer fields stay absent.
    """
    finest = _FIELDS.index(current.finest_field())
    updates = {}
    for field in _FIELDS[:finest]:
        if getattr(current, field) is None and getattr(previous, field) is not None:
            updates[field] = getattr(previous, field)
    return replace(current, **updates) if updates else current


def resolve(ts: PartialTimestamp) -> Optional[ResolvedInstant]:
    """Default absent fields (year -> sentinel, month/day -> 1, clock -> 0)
    and convert to epoch seconds. Returns None for calendar-invalid dates.
    """
    try:
        instant = datetime(
            ts.year if ts.year is not None else SENTINEL_YEAR,
            ts.month if ts.month is not None else 1,
            ts.day if ts.day is not None else 1,
            ts.hour if ts.hour is not None else 0,
            ts.minute if ts.minute is not None else 0,
        )
    except ValueError:
        return None
    seconds = int((instant - EPOCH).total_seconds())
    return ResolvedInstant(seconds=seconds, resolution=ts.finest_field())


def distance_between(
    a: PartialTimestamp, b: PartialTimestamp
) -> Optional[tuple[Relation, TemporalUnit]]:
    """Order and bucketed distance between two mentions, or None when the pair
    is not comparable.

    Year-less mentions resolve against the sentinel year, so they compare only
    with each other; mixing an explicit year with a year-less mention yields
    None. Exact ties report (before, <=minutes): narrative order stands in for
    the unavailable causal order.
    """
    if (a.year is None) != (b.year is None):
        return None
    ia, ib = resolve(a), resolve(b)
    if ia is None or ib is None:
        return None
    delta = ib.seconds - ia.seconds
    order = Relation.BEFORE if delta >= 0 else Relation.AFTER
    return order, bucket_of_seconds(abs(delta))
