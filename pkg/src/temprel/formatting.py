"""Serialization of extracted pairs into seq2seq text instances, negative
sampling, duration-instance formatting, and hypothesis parsing/composition.

Emitted text is byte-exact against two grammars:

    input:  event: <A> starts (before|after) <B>. story: <P>
    output: answer: (positive|negative)( [extra_id_K])?

and for duration instances:

    input:  event: <tokens with [V] inserted left of the trigger verb>
    output: answer: [extra_id_K]
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import Comparator, EventPhrase, Relation, TemporalUnit, unit_token
from .extract import EventPair
from .lexicon import find_verb_index

__all__ = [
    "Seq2SeqInstance",
    "ParsedHypothesis",
    "HypothesisParseError",
    "VERB_MARKER",
    "format_pretraining_instance",
    "sample_negatives",
    "format_duration_instance",
    "parse_hypothesis",
    "compose_hypothesis",
]

VERB_MARKER = "[V]"

_CONNECTIVES = {
    " starts before ": (Comparator.START, Relation.BEFORE),
    " starts after ": (Comparator.START, Relation.AFTER),
    " ends before ": (Comparator.END, Relation.BEFORE),
    " ends after ": (Comparator.END, Relation.AFTER),
}


class HypothesisParseError(ValueError):
    pass


@dataclass(frozen=True)
class Seq2SeqInstance:
    input_text: str
    output_text: str

    def __post_init__(self):
        if not self.input_text or not self.output_text:
            raise ValueError("seq2seq instances must be non-empty")

    def to_record(self) -> dict:
        return {"input": self.input_text, "output": self.output_text}


@dataclass(frozen=True)
class ParsedHypothesis:
    """A hypothesis decomposed into (event, comparator, relation, event)."""

    event_a: EventPhrase
    comparator: Comparator
    relation: Relation
    event_b: EventPhrase


def format_pretraining_instance(pair: EventPair, flip: bool) -> Seq2SeqInstance:
    """Render one extracted pair as a start-order comparison instance.

    With flip=True the stated relation is reversed and the answer is negative;
    the distance token, when present, is the extracted one either way (the
    unsigned gap between start points does not change under flipping).
    """
    relation = pair.relation.flip() if flip else pair.relation
    input_text = (
        f"event: {pair.event_a.text} starts {relation.value} {pair.event_b.text}. "
        f"story: {pair.paragraph}"
    )
    output_text = "answer: negative" if flip else "answer: positive"
    if pair.distance is not None:
        output_text += f" {unit_token(pair.distance)}"
    return Seq2SeqInstance(input_text, output_text)


def sample_negatives(pairs: Iterable[EventPair], seed: int) -> Iterator[tuple[EventPair, bool]]:
    """Assign each pair an independent 50% flip from a seeded generator."""
    rng = random.Random(seed)
    for pair in pairs:
        yield pair, rng.random() < 0.5


def format_duration_instance(event: EventPhrase, value: TemporalUnit) -> Seq2SeqInstance:
    """Render a duration-estimation instance with the trigger verb marked."""
    tokens = list(event.tokens)
    tokens.insert(event.verb_index, VERB_MARKER)
    return Seq2SeqInstance(f"event: {' '.join(tokens)}", f"answer: {unit_token(value)}")


def parse_hypothesis(text: str) -> ParsedHypothesis:
    """Split a hypothesis at its single comparator-relation connective.

    Zero or multiple connective occurrences are parse errors. One trailing
    period is stripped from the right-hand event; event texts are treated as
    single-space token sequences.
    """
    hits = []
    for connective in _CONNECTIVES:
        start = 0
        while True:
            index = text.find(connective, start)
            if index < 0:
                break
            hits.append((index, connective))
            start = index + 1
    if not hits:
        raise HypothesisParseError(f"no comparator connective in hypothesis: {text!r}")
    if len(hits) > 1:
        raise HypothesisParseError(f"ambiguous hypothesis (multiple connectives): {text!r}")
    index, connective = hits[0]
    comparator, relation = _CONNECTIVES[connective]
    left = text[:index]
    right = text[index + len(connective):]
    if right.endswith("."):
        right = right[:-1]
    if not left.strip() or not right.strip():
        raise HypothesisParseError(f"empty event phrase in hypothesis: {text!r}")
    return ParsedHypothesis(
        event_a=_event_from_text(left),
        comparator=comparator,
        relation=relation,
        event_b=_event_from_text(right),
    )


def compose_hypothesis(hypothesis: ParsedHypothesis) -> str:
    comparator = "starts" if hypothesis.comparator is Comparator.START else "ends"
    return (
        f"{hypothesis.event_a.text} {comparator} {hypothesis.relation.value} "
        f"{hypothesis.event_b.text}."
    )


def _event_from_text(text: str) -> EventPhrase:
    tokens = tuple(text.split())
    return EventPhrase(tokens, find_verb_index(tokens))
