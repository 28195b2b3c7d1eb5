"""Entailment dataset loading, story-level splitting, and accuracy metrics.

Datasets are JSONL with one instance per line:

    {"story_id": ..., "premise": ..., "hypothesis": ..., "label":
     "entailment"|"contradiction"}

plus an optional "subset" tag (e.g. easy/hard) that the loader preserves and
the harness can filter on. Accuracies are reported per comparator slice; the
story-wide exact match counts a story only when every one of its instances is
answered correctly, and is omitted entirely when story ids are absent.
"""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

from .core import Comparator, Label
from .formatting import HypothesisParseError, ParsedHypothesis, parse_hypothesis

logger = logging.getLogger(__name__)

__all__ = [
    "EntailmentInstance",
    "MetricsReport",
    "DatasetError",
    "load_dataset",
    "split_iid",
    "compute_metrics",
]


class DatasetError(ValueError):
    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"{message} (line {line_number})"
        super().__init__(message)
        self.line_number = line_number


@dataclass(frozen=True)
class EntailmentInstance:
    story_id: str
    premise: str
    hypothesis_text: str
    hypothesis: ParsedHypothesis
    gold: Label
    subset: Optional[str] = None

    @property
    def comparator(self) -> Comparator:
        return self.hypothesis.comparator

    def to_record(self) -> dict:
        record = {
            "story_id": self.story_id,
            "premise": self.premise,
            "hypothesis": self.hypothesis_text,
            "label": self.gold.value,
        }
        if self.subset is not None:
            record["subset"] = self.subset
        return record


def parse_instance_record(record: dict, line_number: int | None = None) -> EntailmentInstance:
    if not isinstance(record, dict):
        raise DatasetError("instance must be an object", line_number)
    for key in ("premise", "hypothesis", "label"):
        if not isinstance(record.get(key), str):
            raise DatasetError(f"missing or non-string field {key!r}", line_number)
    try:
        gold = Label(record["label"])
    except ValueError:
        raise DatasetError(f"unknown label {record['label']!r}", line_number) from None
    try:
        hypothesis = parse_hypothesis(record["hypothesis"])
    except HypothesisParseError as exc:
        raise DatasetError(str(exc), line_number) from exc
    story_id = record.get("story_id", "")
    if not isinstance(story_id, str):
        raise DatasetError("story_id must be a string", line_number)
    subset = record.get("subset")
    if subset is not None and not isinstance(subset, str):
        raise DatasetError("subset must be a string", line_number)
    return EntailmentInstance(
        story_id=story_id,
        premise=record["premise"],
        hypothesis_text=record["hypothesis"],
        hypothesis=hypothesis,
        gold=gold,
        subset=subset,
    )


def load_dataset(
    source: Union[str, Path, Iterable[str]], strict: bool = False
) -> Iterator[EntailmentInstance]:
    """Stream instances from JSONL in input order; malformed records are
    logged and skipped unless strict."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            yield from load_dataset(fh, strict=strict)
        return
    for line_number, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"invalid JSON: {exc}", line_number) from exc
            instance = parse_instance_record(record, line_number)
        except DatasetError as exc:
            if strict:
                raise
            logger.warning("skipping malformed dataset record: %s", exc)
            continue
        yield instance


def split_iid(
    instances: Sequence[EntailmentInstance], seed: int, train_ratio: float = 0.2
) -> tuple[list[EntailmentInstance], list[EntailmentInstance]]:
    """Shuffle stories (not instances) with a seeded generator and put the
    first ceil(train_ratio * n_stories) of them in train. No story straddles
    the split."""
    if not 0 < train_ratio < 1:
        raise ValueError(f"train_ratio must be in (0, 1), got {train_ratio}")
    stories: list[str] = []
    seen = set()
    for instance in instances:
        if instance.story_id not in seen:
            seen.add(instance.story_id)
            stories.append(instance.story_id)
    rng = random.Random(seed)
    rng.shuffle(stories)
    n_train = math.ceil(train_ratio * len(stories))
    train_stories = set(stories[:n_train])
    train = [inst for inst in instances if inst.story_id in train_stories]
    test = [inst for inst in instances if inst.story_id not in train_stories]
    if stories and not test:
        logger.warning("degenerate split: all %d stories landed in train", len(stories))
    return train, test


@dataclass(frozen=True)
class MetricsReport:
    """Per-slice accuracies plus the story-wide exact match.

    Empty slices are None, never 0 or 1; story_exact_match is None when any
    instance lacks a story id.
    """

    start_accuracy: Optional[float]
    end_accuracy: Optional[float]
    all_accuracy: Optional[float]
    story_exact_match: Optional[float]
    n_start: int
    n_end: int
    correct_start: int
    correct_end: int
    n_stories: int
    n_stories_all_correct: int

    def to_record(self) -> dict:
        return {
            "start_accuracy": self.start_accuracy,
            "end_accuracy": self.end_accuracy,
            "all_accuracy": self.all_accuracy,
            "story_exact_match": self.story_exact_match,
            "counts": {
                "start": {"correct": self.correct_start, "total": self.n_start},
                "end": {"correct": self.correct_end, "total": self.n_end},
                "stories": {
                    "all_correct": self.n_stories_all_correct,
                    "total": self.n_stories,
                },
            },
        }

    def rows(self) -> list[tuple[str, Optional[int], Optional[int], Optional[float]]]:
        return [
            ("start", self.correct_start, self.n_start, self.start_accuracy),
            ("end", self.correct_end, self.n_end, self.end_accuracy),
            ("all", self.correct_start + self.correct_end, self.n_start + self.n_end,
             self.all_accuracy),
            ("story", self.n_stories_all_correct if self.story_exact_match is not None else None,
             self.n_stories if self.story_exact_match is not None else None,
             self.story_exact_match),
        ]

    def table(self) -> str:
        lines = [f"{'slice':<8}{'correct':>9}{'total':>8}{'accuracy':>10}"]
        for name, correct, total, accuracy in self.rows():
            correct_s = "-" if correct is None else str(correct)
            total_s = "-" if total is None else str(total)
            accuracy_s = "-" if accuracy is None else f"{accuracy:.4f}"
            lines.append(f"{name:<8}{correct_s:>9}{total_s:>8}{accuracy_s:>10}")
        return "\n".join(lines)


def compute_metrics(
    predictions: Sequence[Label],
    golds: Optional[Sequence[Label]],
    instances: Sequence[EntailmentInstance],
) -> MetricsReport:
    """Score aligned predictions. golds=None takes the gold labels from the
    instances themselves."""
    if golds is None:
        golds = [instance.gold for instance in instances]
    if not (len(predictions) == len(golds) == len(instances)):
        raise ValueError(
            f"length mismatch: {len(predictions)} predictions, "
            f"{len(golds)} golds, {len(instances)} instances"
        )
    n = {Comparator.START: 0, Comparator.END: 0}
    correct = {Comparator.START: 0, Comparator.END: 0}
    story_ok: dict[str, bool] = {}
    have_story_ids = all(instance.story_id for instance in instances)
    for prediction, gold, instance in zip(predictions, golds, instances):
        comparator = instance.comparator
        n[comparator] += 1
        hit = prediction is gold
        if hit:
            correct[comparator] += 1
        if have_story_ids:
            story_ok[instance.story_id] = story_ok.get(instance.story_id, True) and hit

    def ratio(num: int, den: int) -> Optional[float]:
        return num / den if den else None

    n_stories = len(story_ok)
    n_all_correct = sum(story_ok.values())
    return MetricsReport(
        start_accuracy=ratio(correct[Comparator.START], n[Comparator.START]),
        end_accuracy=ratio(correct[Comparator.END], n[Comparator.END]),
        all_accuracy=ratio(
            correct[Comparator.START] + correct[Comparator.END],
            n[Comparator.START] + n[Comparator.END],
        ),
        story_exact_match=(
            ratio(n_all_correct, n_stories) if have_story_ids and instances else None
        ),
        n_start=n[Comparator.START],
        n_end=n[Comparator.END],
        correct_start=correct[Comparator.START],
        correct_end=correct[Comparator.END],
        n_stories=n_stories,
        n_stories_all_correct=n_all_correct,
    )
