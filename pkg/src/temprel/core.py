"""Shared domain types: the 7-bucket temporal unit scale, relations, labels,
event phrases, and the bucket arithmetic every other module builds on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

__all__ = [
    "TemporalUnit",
    "Relation",
    "Comparator",
    "Label",
    "EventPhrase",
    "bucket_of_seconds",
    "unit_token",
    "parse_unit_token",
    "UNIT_THRESHOLDS_SECONDS",
]

_HOUR = 3600
_DAY = 24 * _HOUR


class TemporalUnit(enum.IntEnum):
    """Coarse magnitude class for durations and distances, ordered smallest to largest."""

    MINUTES = 0  # anything under an hour
    HOURS = 1
    DAYS = 2
    WEEKS = 3
    MONTHS = 4
    YEARS = 5
    DECADES = 6  # ten years and beyond

    @property
    def canonical_name(self) -> str:
        return self.name.lower()

    @property
    def display(self) -> str:
        """Human-facing name; the open-ended buckets carry their bound."""
        if self is TemporalUnit.MINUTES:
            return "≤minutes"
        if self is TemporalUnit.DECADES:
            return "≥decades"
        return self.canonical_name

    @classmethod
    def from_name(cls, name: str) -> "TemporalUnit":
        cleaned = name.strip().lstrip("≤≥<>=").lower()
        try:
            return cls[cleaned.upper()]
        except KeyError:
            raise ValueError(f"unknown temporal unit name: {name!r}") from None


# Half-open lower bounds, in seconds. A delta belongs to the last bucket whose
# lower bound it reaches.
UNIT_THRESHOLDS_SECONDS: tuple[tuple[TemporalUnit, int], ...] = (
    (TemporalUnit.MINUTES, 0),
    (TemporalUnit.HOURS, _HOUR),
    (TemporalUnit.DAYS, _DAY),
    (TemporalUnit.WEEKS, 7 * _DAY),
    (TemporalUnit.MONTHS, 30 * _DAY),
    (TemporalUnit.YEARS, 365 * _DAY),
    (TemporalUnit.DECADES, 3650 * _DAY),
)


def bucket_of_seconds(delta: float) -> TemporalUnit:
    """Map a nonnegative duration in seconds to its coarse unit bucket.

    Raises ValueError for negative input.
    """
    if delta < 0:
        raise ValueError(f"duration must be nonnegative, got {delta}")
    result = TemporalUnit.MINUTES
    for unit, lower in UNIT_THRESHOLDS_SECONDS:
        if delta >= lower:
            result = unit
    return result


def unit_token(unit: TemporalUnit) -> str:
    """Output-vocabulary token for a unit: index k maps to ``[extra_id_k]``."""
    return f"[extra_id_{int(unit)}]"


def parse_unit_token(token: str) -> TemporalUnit | None:
    """Inverse of unit_token. Returns None for anything that is not a unit token."""
    if not (token.startswith("[extra_id_") and token.endswith("]")):
        return None
    body = token[len("[extra_id_") : -1]
    if len(body) != 1 or not body.isdigit():
        return None
    index = int(body)
    if index > 6:
        return None
    return TemporalUnit(index)


class Relation(enum.Enum):
    """Ordering between the two compared time points."""

    BEFORE = "before"
    AFTER = "after"

    def flip(self) -> "Relation":
        return Relation.AFTER if self is Relation.BEFORE else Relation.BEFORE

    def __str__(self) -> str:
        return self.value


class Comparator(enum.Enum):
    """Which endpoint of the first event is compared against the second event's start."""

    START = "start"
    END = "end"

    def __str__(self) -> str:
        return self.value


class Label(enum.Enum):
    ENTAILMENT = "entailment"
    CONTRADICTION = "contradiction"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EventPhrase:
    """A rendered event: its tokens plus the position of the trigger verb."""

    tokens: tuple[str, ...]
    verb_index: int = 0

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("event phrase must be non-empty")
        if not 0 <= self.verb_index < len(self.tokens):
            raise ValueError(
                f"verb_index {self.verb_index} out of range for {len(self.tokens)} tokens"
            )

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    @classmethod
    def from_text(cls, text: str, verb_index: int = 0) -> "EventPhrase":
        return cls(tuple(text.split()), verb_index)
