"""Differentiable symbolic composition of start-order and duration estimates
into end-time decisions.

A start-order comparison yields probabilities (p_before, p_after) and a
7-bucket distance distribution d; a duration query yields a 7-bucket
distribution v. With the bucket ladder c = [0..6]:

    dist = (c . d) * tanh(int_max * (p_after - p_before))
    dur  = c . v

"event A ends before B" holds exactly when dist + dur < 0. Training against a
gold order uses a two-class cross-entropy over the logit pair
[pred, -pred] with pred = dist + dur; class 0 is "after", class 1 is
"before". Gradients are analytic and flow to all 16 probability inputs,
stopping there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Sequence, Union

import numpy as np

from .core import Comparator, Label, Relation
from .formatting import ParsedHypothesis

__all__ = [
    "StartOrderProbs",
    "DistanceDist",
    "DurationDist",
    "SymConfig",
    "PredictorOutput",
    "LossGradients",
    "Predictor",
    "BUCKET_SCALE",
    "DEFAULT_INT_MAX",
    "renormalize",
    "dist_value",
    "dur_value",
    "infer_end_label",
    "end_loss",
    "end_loss_grad",
    "predict",
]

BUCKET_SCALE = (0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0)

# saturates tanh beyond 1 - 1e-8 for any probability gap >= 0.01
DEFAULT_INT_MAX = 1000.0

_WIRE_TOLERANCE = 1e-6
_SUM_TOLERANCE = 1e-9


def renormalize(values: Sequence[float], size: int, tolerance: float = _WIRE_TOLERANCE) -> tuple[float, ...]:
    """Validate a probability vector that may be off by floating-point noise
    and rescale it to sum exactly to one. Rejects anything off by more than
    the tolerance, non-finite, negative, or of the wrong length."""
    arr = np.asarray(values, dtype=float)
    if arr.shape != (size,):
        raise ValueError(f"expected {size} probabilities, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"probabilities must be finite, got {values!r}")
    if np.any(arr < 0.0):
        raise ValueError(f"probabilities must be nonnegative, got {values!r}")
    total = float(arr.sum())
    if abs(total - 1.0) > tolerance:
        raise ValueError(f"probabilities sum to {total!r}, beyond tolerance {tolerance}")
    return tuple(arr / total)


@dataclass(frozen=True)
class StartOrderProbs:
    """P(A starts before B) and its complement."""

    p_before: float
    p_after: float

    def __post_init__(self):
        for name, value in (("p_before", self.p_before), ("p_after", self.p_after)):
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {value!r}")
        if abs(self.p_before + self.p_after - 1.0) > _SUM_TOLERANCE:
            raise ValueError(
                f"start-order probabilities must sum to 1, got {self.p_before + self.p_after!r}"
            )

    @classmethod
    def normalized(cls, values: Sequence[float]) -> "StartOrderProbs":
        before, after = renormalize(values, 2)
        return cls(before, after)

    @property
    def values(self) -> tuple[float, float]:
        return (self.p_before, self.p_after)


class _BucketDist:
    probs: tuple[float, ...]

    def _check(self):
        for value in self.probs:
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"bucket probability {value!r} outside [0, 1]")
        if abs(sum(self.probs) - 1.0) > _SUM_TOLERANCE:
            raise ValueError(f"bucket probabilities must sum to 1, got {sum(self.probs)!r}")

    @classmethod
    def normalized(cls, values: Sequence[float]):
        return cls(renormalize(values, 7))

    @classmethod
    def one_hot(cls, index: int):
        return cls(tuple(1.0 if i == index else 0.0 for i in range(7)))


@dataclass(frozen=True)
class DistanceDist(_BucketDist):
    """Distribution of |start_A - start_B| over the 7 unit buckets."""

    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.probs) != 7:
            raise ValueError("distance distribution needs exactly 7 buckets")
        self._check()


@dataclass(frozen=True)
class DurationDist(_BucketDist):
    """Distribution of an event's duration over the 7 unit buckets."""

    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.probs) != 7:
            raise ValueError("duration distribution needs exactly 7 buckets")
        self._check()


@dataclass(frozen=True)
class SymConfig:
    """Engine constants: the tanh saturation multiplier and the bucket ladder."""

    int_max: float = DEFAULT_INT_MAX
    bucket_scale: tuple[float, ...] = BUCKET_SCALE

    def __post_init__(self):
        if not (math.isfinite(self.int_max) and self.int_max > 0):
            raise ValueError(f"int_max must be positive, got {self.int_max!r}")
        if tuple(self.bucket_scale) != BUCKET_SCALE:
            raise ValueError("bucket_scale is fixed to [0, 1, 2, 3, 4, 5, 6]")


DEFAULT_CONFIG = SymConfig()


@dataclass(frozen=True)
class PredictorOutput:
    """Everything a predictor knows about one ordered event pair."""

    start: StartOrderProbs
    distance: DistanceDist
    duration: DurationDist


@dataclass(frozen=True)
class LossGradients:
    """d loss / d input for the 16 probability inputs."""

    start: np.ndarray     # (2,)  [d/d p_before, d/d p_after]
    distance: np.ndarray  # (7,)
    duration: np.ndarray  # (7,)


class Predictor(Protocol):
    """Any source of start-order, distance, and duration probabilities."""

    def dist(self, event_a: str, event_b: str, context: str) -> tuple[StartOrderProbs, DistanceDist]:
        ...

    def dur(self, event: str) -> DurationDist:
        ...


PairProbs = Union[StartOrderProbs, Sequence[float]]
BucketProbs = Union[DistanceDist, DurationDist, Sequence[float]]


def _pair_array(p: PairProbs) -> np.ndarray:
    if isinstance(p, StartOrderProbs):
        return np.array(p.values, dtype=float)
    arr = np.asarray(p, dtype=float)
    if arr.shape != (2,):
        raise ValueError(f"expected 2 start-order probabilities, got shape {arr.shape}")
    return arr


def _bucket_array(dist: BucketProbs) -> np.ndarray:
    if isinstance(dist, (DistanceDist, DurationDist)):
        return np.array(dist.probs, dtype=float)
    arr = np.asarray(dist, dtype=float)
    if arr.shape != (7,):
        raise ValueError(f"expected 7 bucket probabilities, got shape {arr.shape}")
    return arr


def dist_value(p: PairProbs, d: BucketProbs, cfg: SymConfig = DEFAULT_CONFIG) -> float:
    """Signed, bucket-scaled estimate of start_A - start_B in [-6, 6]."""
    pair = _pair_array(p)
    buckets = _bucket_array(d)
    scale = np.asarray(cfg.bucket_scale)
    return float(scale @ buckets * math.tanh(cfg.int_max * (pair[1] - pair[0])))


def dur_value(v: BucketProbs, cfg: SymConfig = DEFAULT_CONFIG) -> float:
    """Bucket-scaled expected duration in [0, 6]."""
    return float(np.asarray(cfg.bucket_scale) @ _bucket_array(v))


def infer_end_label(dist: float, dur: float) -> Relation:
    """End-time rule: A ends before B starts exactly when dist + dur < 0.

    The boundary dist + dur = 0 ("A ends as B starts") is outside the rule;
    it is resolved to `after` for determinism.
    """
    if not (math.isfinite(dist) and math.isfinite(dur)):
        raise ValueError(f"non-finite inputs: dist={dist!r}, dur={dur!r}")
    return Relation.BEFORE if dist + dur < 0 else Relation.AFTER


def _pred(p: PairProbs, d: BucketProbs, v: BucketProbs, cfg: SymConfig) -> float:
    return dist_value(p, d, cfg) + dur_value(v, cfg)


def end_loss(
    p: PairProbs, d: BucketProbs, v: BucketProbs,
    gold: Relation, cfg: SymConfig = DEFAULT_CONFIG,
) -> float:
    """Two-class cross-entropy over the logit pair [pred, -pred].

    Class 0 is `after` (pred dominant), class 1 is `before` (-pred dominant),
    so the loss is log(1 + exp(-2 pred)) for gold `after` and
    log(1 + exp(2 pred)) for gold `before`.
    """
    pred = _pred(p, d, v, cfg)
    sign = 1.0 if gold is Relation.BEFORE else -1.0
    return float(np.logaddexp(0.0, 2.0 * sign * pred))


def end_loss_grad(
    p: PairProbs, d: BucketProbs, v: BucketProbs,
    gold: Relation, cfg: SymConfig = DEFAULT_CONFIG,
) -> LossGradients:
    """Analytic gradients of end_loss w.r.t. all 16 probability inputs."""
    pair = _pair_array(p)
    d_arr = _bucket_array(d)
    v_arr = _bucket_array(v)
    scale = np.asarray(cfg.bucket_scale)

    tanh_term = math.tanh(cfg.int_max * (pair[1] - pair[0]))
    magnitude = float(scale @ d_arr)
    pred = magnitude * tanh_term + float(scale @ v_arr)

    # sigmoid(2 pred) written through tanh for stability at large |pred|
    s_after = 0.5 * (1.0 + math.tanh(pred))
    dloss_dpred = 2.0 * s_after if gold is Relation.BEFORE else -2.0 * (1.0 - s_after)

    dtanh = (1.0 - tanh_term * tanh_term) * cfg.int_max
    grad_p_after = dloss_dpred * magnitude * dtanh
    return LossGradients(
        start=np.array([-grad_p_after, grad_p_after]),
        distance=dloss_dpred * tanh_term * scale,
        duration=dloss_dpred * scale,
    )


def predict(
    hypothesis: ParsedHypothesis,
    premise: str,
    predictor: Predictor,
    cfg: SymConfig = DEFAULT_CONFIG,
) -> Label:
    """Decide entailment of a parsed hypothesis against a premise.

    The predictor is always queried with the relation fixed to `before`, so
    p_before answers the stated comparison directly. Start hypotheses take the
    argmax of the start-order pair (ties to `before`); end hypotheses compose
    the distance and duration estimates through the end-time rule.
    """
    start, distance = predictor.dist(
        hypothesis.event_a.text, hypothesis.event_b.text, premise
    )
    if hypothesis.comparator is Comparator.START:
        predicted = Relation.BEFORE if start.p_before >= start.p_after else Relation.AFTER
    else:
        duration = predictor.dur(hypothesis.event_a.text)
        predicted = infer_end_label(dist_value(start, distance, cfg), dur_value(duration, cfg))
    return Label.ENTAILMENT if predicted is hypothesis.relation else Label.CONTRADICTION
