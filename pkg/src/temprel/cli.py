"""Command-line entry point.

Subcommands:

    extract         event-pair extraction from an annotated corpus
    format          seq2seq pre-training / duration data files
    predict         run a predictor over an entailment dataset
    eval            metrics (table, JSON, TSV, figures) from predictions
    split           story-level iid train/test split
    ping-predictor  one dist + one dur round-trip with latencies

Exit codes: 0 success, 1 usage error, 2 data error under --strict.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from .core import EventPhrase, Label, TemporalUnit
from .evaluation import DatasetError, compute_metrics, load_dataset, split_iid
from .extract import CorpusError, EventPair, extract_corpus, load_corpus
from .formatting import format_duration_instance, format_pretraining_instance, sample_negatives
from .predictor import PredictorError, make_predictor
from .symbolic import SymConfig, predict as predict_label

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class CliDataError(Exception):
    pass


class CliUsageError(Exception):
    pass


def _atomic_write_lines(path: str | Path, lines) -> int:
    """Write lines to path via a temp file and rename; never leaves a partial
    file behind on failure."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(path.name + ".tmp")
    count = 0
    try:
        with open(tmp_path, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line)
                fh.write("\n")
                count += 1
        os.replace(tmp_path, path)
    finally:
        if tmp_path.exists():
            tmp_path.unlink()
    return count


def _require_input(path: str) -> Path:
    resolved = Path(path)
    if not resolved.is_file():
        raise CliUsageError(f"input file not found: {resolved}")
    return resolved


def _read_jsonl(path: Path):
    with open(path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if line.strip():
                yield line_number, line


# ---------------------------------------------------------------------------
# subcommands

def _cmd_extract(args) -> int:
    corpus = _require_input(args.corpus)
    docs = load_corpus(corpus, strict=args.strict)
    pairs = extract_corpus(docs, mode=args.mode, workers=args.workers)
    count = _atomic_write_lines(
        args.out, (json.dumps(pair.to_record(), ensure_ascii=False) for pair in pairs)
    )
    logger.info("wrote %d pairs to %s", count, args.out)
    return EXIT_OK


def _format_pretrain(path: Path, seed: int, strict: bool):
    pairs = []
    for line_number, line in _read_jsonl(path):
        try:
            pairs.append(EventPair.from_record(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            if strict:
                raise CliDataError(f"bad event pair on line {line_number}: {exc}") from exc
            logger.warning("skipping bad event pair on line %d: %s", line_number, exc)
    for pair, flip in sample_negatives(pairs, seed=seed):
        instance = format_pretraining_instance(pair, flip)
        yield json.dumps(instance.to_record(), ensure_ascii=False)


def _format_duration(path: Path, strict: bool):
    for line_number, line in _read_jsonl(path):
        try:
            record = json.loads(line)
            event = EventPhrase(tuple(record["tokens"]), record.get("verb_index", 0))
            value = TemporalUnit.from_name(record["value"])
        except (ValueError, KeyError, TypeError) as exc:
            if strict:
                raise CliDataError(f"bad duration record on line {line_number}: {exc}") from exc
            logger.warning("skipping bad duration record on line %d: %s", line_number, exc)
            continue
        instance = format_duration_instance(event, value)
        yield json.dumps(instance.to_record(), ensure_ascii=False)


def _cmd_format(args) -> int:
    path = _require_input(args.input)
    if args.kind == "pretrain":
        lines = _format_pretrain(path, args.seed, args.strict)
    else:
        lines = _format_duration(path, args.strict)
    count = _atomic_write_lines(args.out, lines)
    logger.info("wrote %d instances to %s", count, args.out)
    return EXIT_OK


def _load_instances(path: Path, strict: bool, subset: str | None):
    instances = list(load_dataset(path, strict=strict))
    if subset is not None:
        instances = [inst for inst in instances if inst.subset == subset]
    return instances


def _cmd_predict(args) -> int:
    path = _require_input(args.input)
    instances = _load_instances(path, args.strict, args.subset)
    cfg = SymConfig(int_max=args.int_max)
    predictor = make_predictor(args.predictor)
    try:
        lines = [
            json.dumps(
                {
                    "story_id": instance.story_id,
                    "pred": predict_label(instance.hypothesis, instance.premise, predictor, cfg).value,
                },
                ensure_ascii=False,
            )
            for instance in instances
        ]
    finally:
        close = getattr(predictor, "close", None)
        if close is not None:
            close()
    count = _atomic_write_lines(args.out, lines)
    logger.info("wrote %d predictions to %s", count, args.out)
    return EXIT_OK


def _read_predictions(path: Path) -> list[tuple[str, Label]]:
    out = []
    for line_number, line in _read_jsonl(path):
        try:
            record = json.loads(line)
            out.append((record.get("story_id", ""), Label(record["pred"])))
        except (ValueError, KeyError, TypeError) as exc:
            raise CliDataError(f"bad prediction on line {line_number}: {exc}") from exc
    return out


def _cmd_eval(args) -> int:
    gold_path = _require_input(args.gold)
    pred_path = _require_input(args.pred)
    instances = _load_instances(gold_path, args.strict, args.subset)
    predictions = _read_predictions(pred_path)
    if len(predictions) != len(instances):
        raise CliDataError(
            f"{len(predictions)} predictions vs {len(instances)} gold instances"
        )
    for i, ((story_id, _), instance) in enumerate(zip(predictions, instances), start=1):
        if story_id and instance.story_id and story_id != instance.story_id:
            raise CliDataError(
                f"prediction {i} story_id {story_id!r} does not match gold {instance.story_id!r}"
            )
    report = compute_metrics([label for _, label in predictions], None, instances)
    if args.json:
        print(json.dumps(report.to_record(), indent=2))
    else:
        print(report.table())
    if args.report_dir:
        from .report import write_report

        for path in write_report(report, args.report_dir):
            logger.info("wrote %s", path)
    return EXIT_OK


def _cmd_split(args) -> int:
    path = _require_input(args.input)
    raw_lines: list[str] = []
    instances = []
    for line_number, line in _read_jsonl(path):
        raw_lines.append(line.rstrip("\n"))
        try:
            from .evaluation import parse_instance_record

            instances.append(parse_instance_record(json.loads(line), line_number))
        except (DatasetError, json.JSONDecodeError) as exc:
            raise CliDataError(f"cannot split over malformed record: {exc}") from exc
    train, test = split_iid(instances, seed=args.seed, train_ratio=args.ratio)
    train_stories = {inst.story_id for inst in train}
    stem = str(path)[:-len(".jsonl")] if str(path).endswith(".jsonl") else str(path)
    train_out = args.train_out or f"{stem}.train.jsonl"
    test_out = args.test_out or f"{stem}.test.jsonl"
    _atomic_write_lines(
        train_out,
        (line for line, inst in zip(raw_lines, instances) if inst.story_id in train_stories),
    )
    _atomic_write_lines(
        test_out,
        (line for line, inst in zip(raw_lines, instances) if inst.story_id not in train_stories),
    )
    print(f"train: {len(train)} instances ({len(train_stories)} stories) -> {train_out}")
    print(f"test:  {len(test)} instances -> {test_out}")
    return EXIT_OK


def _cmd_ping(args) -> int:
    predictor = make_predictor(args.predictor)
    cfg = SymConfig(int_max=args.int_max)
    try:
        started = time.perf_counter()
        start, distance = predictor.dist(
            "went to the park", "wrote a review", "I went to the park. I wrote a review."
        )
        dist_ms = (time.perf_counter() - started) * 1000
        started = time.perf_counter()
        duration = predictor.dur("went to the park")
        dur_ms = (time.perf_counter() - started) * 1000
    finally:
        close = getattr(predictor, "close", None)
        if close is not None:
            close()
    print(f"dist ok in {dist_ms:.1f} ms: p_before={start.p_before:.4f} "
          f"p_after={start.p_after:.4f} sum(d)={sum(distance.probs):.6f}")
    print(f"dur  ok in {dur_ms:.1f} ms: sum(v)={sum(duration.probs):.6f}")
    from .symbolic import dist_value, dur_value

    print(f"composed: dist={dist_value(start, distance, cfg):+.4f} "
          f"dur={dur_value(duration, cfg):.4f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> _Parser:
    parser = _Parser(prog="temprel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="extract event pairs from an annotated corpus")
    p.add_argument("--corpus", required=True, help="annotated corpus JSONL")
    p.add_argument("--mode", choices=["within", "cross", "both"], default="both")
    p.add_argument("--out", required=True, help="event-pair JSONL output")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("format", help="write seq2seq data files")
    p.add_argument("--kind", choices=["pretrain", "duration"], required=True)
    p.add_argument("--in", dest="input", required=True,
                   help="event pairs (pretrain) or duration records")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_format)

    p = sub.add_parser("predict", help="predict entailment labels for a dataset")
    p.add_argument("--in", dest="input", required=True, help="entailment dataset JSONL")
    p.add_argument("--predictor", default="baseline",
                   help="baseline | cmd:<command> | http(s)://endpoint")
    p.add_argument("--out", required=True, help="predictions JSONL")
    p.add_argument("--int-max", type=float, default=1000.0)
    p.add_argument("--subset", default=None, help="only instances with this subset tag")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("eval", help="score predictions against gold labels")
    p.add_argument("--pred", required=True, help="predictions JSONL")
    p.add_argument("--gold", required=True, help="gold dataset JSONL")
    p.add_argument("--report-dir", default=None,
                   help="also write metrics.json/metrics.tsv and figures here")
    p.add_argument("--json", action="store_true", help="print the JSON record instead of a table")
    p.add_argument("--subset", default=None)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("split", help="story-level iid train/test split")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--ratio", type=float, default=0.2)
    p.add_argument("--train-out", default=None)
    p.add_argument("--test-out", default=None)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("ping-predictor", help="round-trip one dist and one dur query")
    p.add_argument("--predictor", required=True)
    p.add_argument("--int-max", type=float, default=1000.0)
    p.set_defaults(func=_cmd_ping)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (CliDataError, CorpusError, DatasetError) as exc:
        print(f"temprel: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CliUsageError as exc:
        print(f"temprel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PredictorError as exc:
        print(f"temprel: predictor error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"temprel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
