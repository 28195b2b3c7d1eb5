"""temprel: distant-supervision temporal relation extraction, a differentiable
symbolic start/duration reasoner for end-time entailment, and an evaluation
harness for start/end textual-entailment datasets."""

from .core import (
    Comparator,
    EventPhrase,
    Label,
    Relation,
    TemporalUnit,
    bucket_of_seconds,
    parse_unit_token,
    unit_token,
)
from .evaluation import (
    EntailmentInstance,
    MetricsReport,
    compute_metrics,
    load_dataset,
    split_iid,
)
from .extract import (
    AnnotatedDocument,
    EventPair,
    extract_corpus,
    extract_cross_sentence,
    extract_within_sentence,
    fallback_annotate,
    load_corpus,
    render_event_phrase,
)
from .formatting import (
    ParsedHypothesis,
    Seq2SeqInstance,
    compose_hypothesis,
    format_duration_instance,
    format_pretraining_instance,
    parse_hypothesis,
    sample_negatives,
)
from .predictor import BaselinePredictor, HttpPredictor, SubprocessPredictor, make_predictor
from .symbolic import (
    DistanceDist,
    DurationDist,
    PredictorOutput,
    StartOrderProbs,
    SymConfig,
    dist_value,
    dur_value,
    end_loss,
    end_loss_grad,
    infer_end_label,
    predict,
)
from .timex import PartialTimestamp, distance_between, inherit, parse_temporal_expression

__version__ = "0.1.0"

__all__ = [
    "Comparator", "EventPhrase", "Label", "Relation", "TemporalUnit",
    "bucket_of_seconds", "unit_token", "parse_unit_token",
    "PartialTimestamp", "parse_temporal_expression", "inherit", "distance_between",
    "AnnotatedDocument", "EventPair", "load_corpus", "extract_within_sentence",
    "extract_cross_sentence", "extract_corpus", "render_event_phrase", "fallback_annotate",
    "Seq2SeqInstance", "ParsedHypothesis", "format_pretraining_instance",
    "sample_negatives", "format_duration_instance", "parse_hypothesis", "compose_hypothesis",
    "StartOrderProbs", "DistanceDist", "DurationDist", "SymConfig", "PredictorOutput",
    "dist_value", "dur_value", "infer_end_label", "end_loss", "end_loss_grad", "predict",
    "BaselinePredictor", "SubprocessPredictor", "HttpPredictor", "make_predictor",
    "EntailmentInstance", "MetricsReport", "load_dataset", "split_iid", "compute_metrics",
    "__version__",
]
