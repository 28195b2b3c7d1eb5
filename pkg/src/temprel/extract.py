"""Distant-supervision extraction of ordered event pairs from annotated
documents.

Two extractors run over verb frames with temporal arguments:

* within-sentence: a temporal argument headed by "before"/"after" that itself
  contains a verb yields an ordered pair with no distance;
* cross-sentence: explicit time mentions in temporal arguments are parsed,
  missing fields are inherited from the nearest previous mention, and adjacent
  dated verbs in a paragraph yield pairs carrying a bucketed distance.

Documents are processed independently, so extraction can fan out over worker
processes; output order always follows input order.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence, Union

from .core import EventPhrase, Relation, TemporalUnit
from .lexicon import is_verb_token
from .timex import PartialTimestamp, distance_between, inherit, parse_temporal_expression

logger = logging.getLogger(__name__)

__all__ = [
    "VerbFrame",
    "Sentence",
    "AnnotatedDocument",
    "EventPair",
    "Provenance",
    "CorpusError",
    "load_corpus",
    "extract_within_sentence",
    "extract_cross_sentence",
    "extract_pairs",
    "extract_corpus",
    "render_event_phrase",
    "fallback_annotate",
]

WITHIN_SENTENCE = "within_sentence"
CROSS_SENTENCE = "cross_sentence"

_CORE_ROLE_RE = re.compile(r"^ARG[0-5]$", re.IGNORECASE)
_TEMPORAL_ROLES = frozenset({"ARGM-TMP", "AM-TMP", "TMP"})

Span = tuple[int, int]


class CorpusError(ValueError):
    """Malformed corpus record; carries enough context to locate it."""

    def __init__(self, message: str, line_number: int | None = None, doc_id: str | None = None):
        where = []
        if line_number is not None:
            where.append(f"line {line_number}")
        if doc_id:
            where.append(f"doc {doc_id!r}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)
        self.line_number = line_number
        self.doc_id = doc_id


@dataclass(frozen=True)
class VerbFrame:
    """One predicate with its labeled argument spans (half-open token indices)."""

    verb_span: Span
    args: tuple[tuple[str, Span], ...] = ()

    def temporal_args(self) -> tuple[Span, ...]:
        return tuple(span for role, span in self.args if role.upper() in _TEMPORAL_ROLES)

    def core_args(self) -> tuple[Span, ...]:
        return tuple(span for role, span in self.args if _CORE_ROLE_RE.match(role))

    def argument_token_count(self) -> int:
        return sum(end - start for _, (start, end) in self.args)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[str, ...]
    frames: tuple[VerbFrame, ...] = ()

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class AnnotatedDocument:
    doc_id: str
    paragraphs: tuple[tuple[Sentence, ...], ...]


@dataclass(frozen=True)
class Provenance:
    kind: str  # within_sentence | cross_sentence
    doc_id: str
    paragraph_index: int
    sentences: tuple[int, ...]


@dataclass(frozen=True)
class EventPair:
    """An extracted ordered comparison between the start points of two events."""

    event_a: EventPhrase
    event_b: EventPhrase
    relation: Relation
    distance: Optional[TemporalUnit]
    paragraph: str
    provenance: Provenance

    def __post_init__(self):
        if (self.distance is not None) != (self.provenance.kind == CROSS_SENTENCE):
            raise ValueError("distance must be present exactly for cross-sentence pairs")

    def to_record(self) -> dict:
        return {
            "event_a": {"tokens": list(self.event_a.tokens), "verb_index": self.event_a.verb_index},
            "event_b": {"tokens": list(self.event_b.tokens), "verb_index": self.event_b.verb_index},
            "relation": self.relation.value,
            "distance": self.distance.canonical_name if self.distance is not None else None,
            "paragraph": self.paragraph,
            "provenance": {
                "kind": self.provenance.kind,
                "doc_id": self.provenance.doc_id,
                "paragraph_index": self.provenance.paragraph_index,
                "sentences": list(self.provenance.sentences),
            },
        }

    @classmethod
    def from_record(cls, record: dict) -> "EventPair":
        prov = record["provenance"]
        distance = record.get("distance")
        return cls(
            event_a=EventPhrase(tuple(record["event_a"]["tokens"]), record["event_a"]["verb_index"]),
            event_b=EventPhrase(tuple(record["event_b"]["tokens"]), record["event_b"]["verb_index"]),
            relation=Relation(record["relation"]),
            distance=TemporalUnit.from_name(distance) if distance else None,
            paragraph=record["paragraph"],
            provenance=Provenance(
                kind=prov["kind"],
                doc_id=prov["doc_id"],
                paragraph_index=prov["paragraph_index"],
                sentences=tuple(prov["sentences"]),
            ),
        )


# ---------------------------------------------------------------------------
# corpus ingestion

def _require(condition: bool, message: str, line_number: int | None, doc_id: str | None):
    if not condition:
        raise CorpusError(message, line_number, doc_id)


def _parse_span(raw, n_tokens: int, what: str, line_number, doc_id) -> Span:
    _require(
        isinstance(raw, (list, tuple)) and len(raw) == 2
        and all(isinstance(v, int) for v in raw),
        f"{what} must be a [start, end) pair, got {raw!r}", line_number, doc_id,
    )
    start, end = raw
    _require(0 <= start < end <= n_tokens,
             f"{what} {raw!r} out of bounds for {n_tokens} tokens", line_number, doc_id)
    return (start, end)


def _parse_sentence(raw, line_number, doc_id) -> Sentence:
    _require(isinstance(raw, dict), "sentence must be an object", line_number, doc_id)
    tokens = raw.get("tokens")
    _require(
        isinstance(tokens, list) and all(isinstance(t, str) for t in tokens),
        "sentence tokens must be a list of strings", line_number, doc_id,
    )
    frames = []
    for raw_frame in raw.get("frames", []):
        _require(isinstance(raw_frame, dict), "frame must be an object", line_number, doc_id)
        verb_span = _parse_span(raw_frame.get("verb"), len(tokens), "verb span", line_number, doc_id)
        args = []
        occupied = [verb_span]
        for raw_arg in raw_frame.get("args", []):
            _require(
                isinstance(raw_arg, dict) and isinstance(raw_arg.get("role"), str),
                "argument must be an object with a role", line_number, doc_id,
            )
            span = _parse_span(raw_arg.get("span"), len(tokens), "argument span", line_number, doc_id)
            for other in occupied:
                _require(span[1] <= other[0] or other[1] <= span[0],
                         f"frame spans overlap: {span} vs {other}", line_number, doc_id)
            occupied.append(span)
            args.append((raw_arg["role"], span))
        frames.append(VerbFrame(verb_span=verb_span, args=tuple(args)))
    return Sentence(tokens=tuple(tokens), frames=tuple(frames))


def parse_document_record(record: dict, line_number: int | None = None) -> AnnotatedDocument:
    _require(isinstance(record, dict), "record must be an object", line_number, None)
    doc_id = record.get("doc_id")
    _require(isinstance(doc_id, str) and doc_id != "", "doc_id must be a non-empty string",
             line_number, None)
    paragraphs_raw = record.get("paragraphs")
    _require(isinstance(paragraphs_raw, list), "paragraphs must be a list", line_number, doc_id)
    paragraphs = []
    for raw_paragraph in paragraphs_raw:
        _require(isinstance(raw_paragraph, list), "paragraph must be a list of sentences",
                 line_number, doc_id)
        paragraphs.append(tuple(_parse_sentence(s, line_number, doc_id) for s in raw_paragraph))
    return AnnotatedDocument(doc_id=doc_id, paragraphs=tuple(paragraphs))


def load_corpus(
    source: Union[str, Path, Iterable[str]],
    strict: bool = False,
) -> Iterator[AnnotatedDocument]:
    """Stream documents from JSONL (path or line iterable) in input order.

    Malformed records are logged and skipped; with strict=True the first one
    raises CorpusError instead.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            yield from load_corpus(fh, strict=strict)
        return

    seen_ids: set[str] = set()
    for line_number, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"invalid JSON: {exc}", line_number, None) from exc
            document = parse_document_record(record, line_number)
            if document.doc_id in seen_ids:
                raise CorpusError("duplicate doc_id", line_number, document.doc_id)
            seen_ids.add(document.doc_id)
        except CorpusError as exc:
            if strict:
                raise
            logger.warning("skipping malformed corpus record: %s", exc)
            continue
        yield document


# ---------------------------------------------------------------------------
# event-phrase rendering

def render_event_phrase(frame: VerbFrame, tokens: Sequence[str]) -> EventPhrase:
    """Verb plus core arguments in token order, temporal arguments excluded."""
    if frame.verb_span[0] >= frame.verb_span[1]:
        raise ValueError("frame has an empty verb span")
    spans = sorted([("V", frame.verb_span)] + [("A", s) for s in frame.core_args()],
                   key=lambda item: item[1])
    rendered: list[str] = []
    verb_index = 0
    for kind, (start, end) in spans:
        if kind == "V":
            verb_index = len(rendered)
        rendered.extend(tokens[start:end])
    return EventPhrase(tuple(rendered), verb_index)


def _paragraph_text(paragraph: Sequence[Sentence]) -> str:
    return " ".join(tok for sentence in paragraph for tok in sentence.tokens)


# ---------------------------------------------------------------------------
# within-sentence extraction

def _span_contains(outer: Span, inner: Span) -> bool:
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def _within_pairs_for_sentence(
    sentence: Sentence, paragraph_text: str, doc_id: str, paragraph_index: int, sentence_index: int
) -> Iterator[EventPair]:
    frames = sorted(sentence.frames, key=lambda f: f.verb_span)
    for frame in frames:
        for tmp_span in sorted(frame.temporal_args()):
            head = sentence.tokens[tmp_span[0]].lower()
            if head not in ("before", "after"):
                continue
            candidates = [
                other for other in frames
                if other is not frame
                and other.verb_span != frame.verb_span
                and _span_contains(tmp_span, other.verb_span)
            ]
            if not candidates:
                continue
            # most argument tokens wins; ties go to the earliest verb
            chosen = max(candidates, key=lambda f: (f.argument_token_count(), -f.verb_span[0]))
            yield EventPair(
                event_a=render_event_phrase(frame, sentence.tokens),
                event_b=render_event_phrase(chosen, sentence.tokens),
                relation=Relation(head),
                distance=None,
                paragraph=paragraph_text,
                provenance=Provenance(WITHIN_SENTENCE, doc_id, paragraph_index, (sentence_index,)),
            )
            break  # one temporal argument per extraction decision


def extract_within_sentence(doc: AnnotatedDocument) -> Iterator[EventPair]:
    for p_index, paragraph in enumerate(doc.paragraphs):
        paragraph_text = _paragraph_text(paragraph)
        for s_index, sentence in enumerate(paragraph):
            yield from _within_pairs_for_sentence(
                sentence, paragraph_text, doc.doc_id, p_index, s_index
            )


# ---------------------------------------------------------------------------
# cross-sentence extraction

def _dated_frames(paragraph: Sequence[Sentence]) -> list[tuple[int, VerbFrame, PartialTimestamp]]:
    """Frames with a parseable temporal expression, fields inherited from the
    nearest previous resolved mention, in narrative order."""
    out: list[tuple[int, VerbFrame, PartialTimestamp]] = []
    previous: PartialTimestamp | None = None
    for s_index, sentence in enumerate(paragraph):
        for frame in sorted(sentence.frames, key=lambda f: f.verb_span):
            for tmp_span in sorted(frame.temporal_args()):
                parsed = parse_temporal_expression(sentence.tokens[tmp_span[0]:tmp_span[1]])
                if parsed is None:
                    continue
                merged = inherit(previous, parsed) if previous is not None else parsed
                previous = merged
                out.append((s_index, frame, merged))
                break  # one temporal argument per extraction decision
    return out


def extract_cross_sentence(doc: AnnotatedDocument) -> Iterator[EventPair]:
    for p_index, paragraph in enumerate(doc.paragraphs):
        dated = _dated_frames(paragraph)
        if len(dated) < 2:
            continue
        paragraph_text = _paragraph_text(paragraph)
        for (s_a, frame_a, ts_a), (s_b, frame_b, ts_b) in zip(dated, dated[1:]):
            if s_a == s_b and frame_a.verb_span == frame_b.verb_span:
                continue  # same verb occurrence annotated twice
            comparison = distance_between(ts_a, ts_b)
            if comparison is None:
                continue
            order, bucket = comparison
            s_tokens_a = paragraph[s_a].tokens
            s_tokens_b = paragraph[s_b].tokens
            yield EventPair(
                event_a=render_event_phrase(frame_a, s_tokens_a),
                event_b=render_event_phrase(frame_b, s_tokens_b),
                relation=order,
                distance=bucket,
                paragraph=paragraph_text,
                provenance=Provenance(CROSS_SENTENCE, doc.doc_id, p_index, (s_a, s_b)),
            )


# ---------------------------------------------------------------------------
# corpus-level driver

def extract_pairs(doc: AnnotatedDocument, mode: str = "both") -> list[EventPair]:
    if mode not in ("within", "cross", "both"):
        raise ValueError(f"unknown extraction mode: {mode!r}")
    pairs: list[EventPair] = []
    if mode in ("within", "both"):
        pairs.extend(extract_within_sentence(doc))
    if mode in ("cross", "both"):
        pairs.extend(extract_cross_sentence(doc))
    return pairs


def _extract_task(payload: tuple[AnnotatedDocument, str]) -> list[EventPair]:
    doc, mode = payload
    return extract_pairs(doc, mode)


def extract_corpus(
    docs: Iterable[AnnotatedDocument], mode: str = "both", workers: int = 1
) -> Iterator[EventPair]:
    """Extract pairs from every document, preserving document order regardless
    of worker count."""
    if workers <= 1:
        for doc in docs:
            yield from extract_pairs(doc, mode)
        return
    with multiprocessing.Pool(workers) as pool:
        tasks = ((doc, mode) for doc in docs)
        for pairs in pool.imap(_extract_task, tasks, chunksize=1):
            yield from pairs


# ---------------------------------------------------------------------------
# fallback annotator (desk-scale stand-in for an external role labeler)

_PUNCT = set(".,;:!?\"'()[]{}")
_SENTENCE_END = {".", "!", "?"}
_TEMPORAL_PREPOSITIONS = {"on", "in", "at", "by", "during", "until", "till", "since"}


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    for chunk in text.split():
        head = []
        while chunk and chunk[0] in _PUNCT:
            head.append(chunk[0])
            chunk = chunk[1:]
        tail = []
        while chunk and chunk[-1] in _PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(head)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens


def _split_sentences(tokens: Sequence[str]) -> list[tuple[str, ...]]:
    sentences: list[tuple[str, ...]] = []
    current: list[str] = []
    for tok in tokens:
        current.append(tok)
        if tok in _SENTENCE_END:
            sentences.append(tuple(current))
            current = []
    if current:
        sentences.append(tuple(current))
    return sentences


def _is_punct_token(token: str) -> bool:
    return all(ch in _PUNCT for ch in token)


def _expression_spans(tokens: Sequence[str]) -> list[Span]:
    """Non-overlapping parseable time-mention spans, left to right, each
    extended to cover an immediately preceding temporal preposition."""
    spans: list[Span] = []
    offset = 0
    while offset < len(tokens):
        parsed = parse_temporal_expression(tokens[offset:])
        if parsed is None:
            break
        start = offset + parsed.source_span[0]
        end = offset + parsed.source_span[1]
        if start > 0 and tokens[start - 1].lower() in _TEMPORAL_PREPOSITIONS:
            start -= 1
        spans.append((start, end))
        offset = end
    return spans


def _nearest_verb_left(verb_positions: Sequence[int], index: int) -> Optional[int]:
    best = None
    for v in verb_positions:
        if v < index:
            best = v
        else:
            break
    return best


def _annotate_sentence(tokens: tuple[str, ...]) -> Sentence:
    verbs = [i for i, tok in enumerate(tokens) if is_verb_token(tok)]
    keywords = [i for i, tok in enumerate(tokens) if tok.lower() in ("before", "after")]
    expr_spans = _expression_spans(tokens)
    in_expression = set()
    for start, end in expr_spans:
        in_expression.update(range(start, end))

    def is_boundary(i: int) -> bool:
        return (
            i in verbs
            or i in keywords
            or i in in_expression
            or _is_punct_token(tokens[i])
        )

    frames = []
    for v in verbs:
        args: list[tuple[str, Span]] = []
        # subject-ish run immediately left of the verb
        left = v
        while left - 1 >= 0 and not is_boundary(left - 1):
            left -= 1
        if left < v:
            args.append(("ARG0", (left, v)))
        # object-ish run immediately right of the verb
        right = v + 1
        while right < len(tokens) and not is_boundary(right):
            right += 1
        if right > v + 1:
            args.append(("ARG1", (v + 1, right)))
        # keyword-headed temporal argument attaches to the nearest verb left
        for k in keywords:
            if _nearest_verb_left(verbs, k) != v:
                continue
            end = k + 1
            while (end < len(tokens) and not _is_punct_token(tokens[end])
                   and end not in keywords):
                end += 1
            if end > k + 1:
                args.append(("ARGM-TMP", (k, end)))
        # expression-based temporal argument, unless a keyword span covers it
        for span in expr_spans:
            if _nearest_verb_left(verbs, span[0]) != v:
                continue
            if any(role == "ARGM-TMP" and _span_contains(existing, span)
                   for role, existing in args):
                continue
            if any(not (span[1] <= s or e <= span[0]) for _, (s, e) in args):
                continue
            args.append(("ARGM-TMP", span))
        frames.append(VerbFrame(verb_span=(v, v + 1), args=tuple(args)))
    return Sentence(tokens=tokens, frames=tuple(frames))


def fallback_annotate(text: str, doc_id: str = "doc") -> AnnotatedDocument:
    """Deterministic lexicon-and-heuristics annotator for plain text.

    A stand-in that lets the extractors run without external annotations; not
    a substitute for a real role labeler.
    """
    paragraphs = []
    for block in text.split("\n\n"):
        tokens = _tokenize(block)
        if not tokens:
            continue
        sentences = tuple(_annotate_sentence(s) for s in _split_sentences(tokens))
        paragraphs.append(sentences)
    return AnnotatedDocument(doc_id=doc_id, paragraphs=tuple(paragraphs))
