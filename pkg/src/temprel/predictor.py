"""Probability sources for the symbolic engine.

Three predictors satisfy the same two-query interface:

* BaselinePredictor — deterministic, model-free: narrative order in the
  premise decides the start-order pair, a bundled verb lexicon decides the
  duration bucket.
* SubprocessPredictor — speaks the line-delimited wire protocol over a child
  process's standard streams.
* HttpPredictor — posts one request record per call to a single endpoint.

Wire protocol (one JSON record per line/request):

    {"id": n, "type": "dist", "event_a": ..., "event_b": ..., "context": ...}
        -> {"id": n, "p_before": x, "p_after": y, "d": [7 floats]}
    {"id": n, "type": "dur", "event": ...}
        -> {"id": n, "v": [7 floats]}
    errors -> {"id": n, "error": "..."}

Vectors are renormalized on receipt when off by at most 1e-6 and rejected
otherwise.
"""

from __future__ import annotations

import json
import re
import shlex
import subprocess
import urllib.request
from typing import Optional

from .core import TemporalUnit
from .lexicon import duration_of_verb
from .symbolic import DistanceDist, DurationDist, PredictorOutput, StartOrderProbs

__all__ = [
    "PredictorError",
    "BaselinePredictor",
    "SubprocessPredictor",
    "HttpPredictor",
    "make_predictor",
]

_WORD_RE = re.compile(r"[A-Za-z0-9']+")

_STOPWORDS = frozenset(
    "a an the to of in on at by for with and or but is are was were be been "
    "being he she it they we i you his her its their our my your as that "
    "this these those".split()
)


class PredictorError(RuntimeError):
    """Transport or protocol failure, carrying the offending request."""

    def __init__(self, message: str, request: Optional[dict] = None):
        if request is not None:
            message = f"{message} (request: {json.dumps(request)})"
        super().__init__(message)
        self.request = request


# ---------------------------------------------------------------------------
# baseline

def _words(text: str) -> list[str]:
    return [w.lower() for w in _WORD_RE.findall(text)]


def _locate(event: str, premise_words: list[str]) -> Optional[int]:
    """Start index of the premise window with maximal Jaccard overlap against
    the event's content words; ties go to the earliest window. None when the
    event shares no content word with the premise."""
    event_words = _words(event)
    content = set(event_words) - _STOPWORDS
    if not content or not premise_words:
        return None
    width = min(max(len(event_words), 1), len(premise_words))
    best_score = 0.0
    best_start = None
    for start in range(len(premise_words) - width + 1):
        window = set(premise_words[start:start + width]) - _STOPWORDS
        union = content | window
        score = len(content & window) / len(union) if union else 0.0
        if score > best_score:
            best_score = score
            best_start = start
    return best_start


class BaselinePredictor:
    """Deterministic zero-shot probability source.

    Start order: whichever event's best-matching span starts earlier in the
    premise is taken to start first, at 80% confidence; when either event
    cannot be located the pair is an epsilon away from uniform, leaning
    toward the hypothesis's order of mention. Distance is always one-hot at
    `hours`; duration is a one-hot lexicon lookup on the event's verb,
    defaulting to `days`.
    """

    confident = (0.8, 0.2)
    epsilon = 1e-6
    default_duration = TemporalUnit.DAYS

    def dist(self, event_a: str, event_b: str, context: str) -> tuple[StartOrderProbs, DistanceDist]:
        premise_words = _words(context)
        span_a = _locate(event_a, premise_words)
        span_b = _locate(event_b, premise_words)
        if span_a is None or span_b is None:
            start = StartOrderProbs(0.5 + self.epsilon, 0.5 - self.epsilon)
        elif span_a <= span_b:
            start = StartOrderProbs(*self.confident)
        else:
            start = StartOrderProbs(*reversed(self.confident))
        return start, DistanceDist.one_hot(int(TemporalUnit.HOURS))

    def dur(self, event: str) -> DurationDist:
        unit = self.default_duration
        for word in _words(event):
            hit = duration_of_verb(word)
            if hit is not None:
                unit = hit
                break
        return DurationDist.one_hot(int(unit))

    def output(self, event_a: str, event_b: str, premise: str) -> PredictorOutput:
        start, distance = self.dist(event_a, event_b, premise)
        return PredictorOutput(start=start, distance=distance, duration=self.dur(event_a))


# ---------------------------------------------------------------------------
# wire-protocol clients

def _parse_dist_response(record: dict, request: dict) -> tuple[StartOrderProbs, DistanceDist]:
    try:
        start = StartOrderProbs.normalized([record["p_before"], record["p_after"]])
        distance = DistanceDist.normalized(record["d"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PredictorError(f"bad dist response {record!r}: {exc}", request) from exc
    return start, distance


def _parse_dur_response(record: dict, request: dict) -> DurationDist:
    try:
        return DurationDist.normalized(record["v"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PredictorError(f"bad dur response {record!r}: {exc}", request) from exc


class _WirePredictor:
    """Shared request/response bookkeeping for transport-backed predictors."""

    def __init__(self):
        self._next_id = 0

    def _send(self, request: dict) -> dict:
        raise NotImplementedError

    def _request(self, record: dict) -> dict:
        self._next_id += 1
        request = {"id": self._next_id, **record}
        response = self._send(request)
        if not isinstance(response, dict):
            raise PredictorError(f"non-object response: {response!r}", request)
        if response.get("error") is not None:
            raise PredictorError(f"predictor error: {response['error']}", request)
        if response.get("id") != request["id"]:
            raise PredictorError(f"response id {response.get('id')!r} does not match", request)
        return response

    def dist(self, event_a: str, event_b: str, context: str) -> tuple[StartOrderProbs, DistanceDist]:
        request = {"type": "dist", "event_a": event_a, "event_b": event_b, "context": context}
        return _parse_dist_response(self._request(request), request)

    def dur(self, event: str) -> DurationDist:
        request = {"type": "dur", "event": event}
        return _parse_dur_response(self._request(request), request)


class SubprocessPredictor(_WirePredictor):
    """Runs a predictor command and exchanges one JSON line per request.

    Responses may arrive out of order; they are matched back by id.
    """

    def __init__(self, command: str):
        super().__init__()
        self.command = command
        try:
            self._proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise PredictorError(f"cannot start predictor command {command!r}: {exc}") from exc
        self._pending: dict[int, dict] = {}

    def _send(self, request: dict) -> dict:
        if self._proc.poll() is not None:
            raise PredictorError("predictor process has exited", request)
        try:
            self._proc.stdin.write(json.dumps(request) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise PredictorError(f"write to predictor failed: {exc}", request) from exc
        wanted = request["id"]
        while wanted not in self._pending:
            line = self._proc.stdout.readline()
            if not line:
                raise PredictorError("predictor closed its output stream", request)
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise PredictorError(f"undecodable response line {line!r}", request) from exc
            key = record.get("id")
            if key is None:
                raise PredictorError(f"response without id: {record!r}", request)
            self._pending[key] = record
        return self._pending.pop(wanted)

    def close(self):
        if self._proc.poll() is None:
            self._proc.stdin.close()
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()


class HttpPredictor(_WirePredictor):
    """Posts each request record to a single HTTP endpoint."""

    def __init__(self, url: str, timeout: float = 30.0):
        super().__init__()
        self.url = url
        self.timeout = timeout

    def _send(self, request: dict) -> dict:
        data = json.dumps(request).encode("utf-8")
        http_request = urllib.request.Request(
            self.url, data=data, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(http_request, timeout=self.timeout) as response:
                body = response.read()
        except OSError as exc:
            raise PredictorError(f"request to {self.url} failed: {exc}", request) from exc
        try:
            return json.loads(body)
        except json.JSONDecodeError as exc:
            raise PredictorError(f"undecodable response body {body!r}", request) from exc


def make_predictor(spec: str):
    """Build a predictor from a scheme-like spec: ``baseline``, ``cmd:<shell
    command>``, or an ``http(s)://`` endpoint."""
    if spec == "baseline":
        return BaselinePredictor()
    if spec.startswith("cmd:"):
        command = spec[len("cmd:"):]
        if not command.strip():
            raise ValueError("empty predictor command")
        return SubprocessPredictor(command)
    if spec.startswith(("http://", "https://")):
        return HttpPredictor(spec)
    raise ValueError(
        f"unknown predictor spec {spec!r}; expected 'baseline', 'cmd:...', or an http(s) URL"
    )
