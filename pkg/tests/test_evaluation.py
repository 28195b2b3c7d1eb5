import json
import logging

import pytest

from temprel.core import Comparator, Label
from temprel.evaluation import (
    DatasetError,
    EntailmentInstance,
    MetricsReport,
    compute_metrics,
    load_dataset,
    parse_instance_record,
    split_iid,
)


def record(story_id="s1", hypothesis="X starts before Y.", label="entailment", **extra):
    rec = {
        "story_id": story_id,
        "premise": "X happened. Then Y happened.",
        "hypothesis": hypothesis,
        "label": label,
    }
    rec.update(extra)
    return rec


def instance(story_id="s1", comparator="starts", label=Label.ENTAILMENT):
    return parse_instance_record(
        record(story_id=story_id, hypothesis=f"X {comparator} before Y.", label=label.value)
    )


class TestLoadDataset:
    def test_well_formed_start_instance(self):
        items = list(load_dataset([json.dumps(record())]))
        assert len(items) == 1
        assert items[0].comparator is Comparator.START
        assert items[0].gold is Label.ENTAILMENT

    def test_fig2_style_row(self):
        rec = record(
            story_id="braces",
            hypothesis="Tom avoids foods he can't eat with braces starts before the braces are removed.",
            label="entailment",
        )
        items = list(load_dataset([json.dumps(rec)]))
        assert items[0].gold is Label.ENTAILMENT
        assert items[0].comparator is Comparator.START
        assert items[0].hypothesis.event_b.text == "the braces are removed"

    def test_missing_label_is_record_error(self):
        rec = record()
        del rec["label"]
        with pytest.raises(DatasetError):
            list(load_dataset([json.dumps(rec)], strict=True))

    def test_lenient_mode_skips_and_logs(self, caplog):
        rec = record()
        bad = record(hypothesis="no connective here.")
        with caplog.at_level(logging.WARNING, logger="temprel.evaluation"):
            items = list(load_dataset([json.dumps(rec), json.dumps(bad)]))
        assert len(items) == 1
        assert any("line 2" in r.message for r in caplog.records)

    def test_subset_tag_preserved(self):
        items = list(load_dataset([json.dumps(record(subset="easy"))]))
        assert items[0].subset == "easy"

    def test_round_trip_record(self):
        rec = record(subset="hard")
        item = parse_instance_record(rec)
        assert item.to_record() == rec


class TestSplitIid:
    def make_instances(self, n_stories, per_story=2):
        return [
            instance(story_id=f"s{story:02d}")
            for story in range(n_stories)
            for _ in range(per_story)
        ]

    def test_20_80_story_counts(self):
        instances = self.make_instances(10)
        train, test = split_iid(instances, seed=42, train_ratio=0.2)
        train_stories = {i.story_id for i in train}
        test_stories = {i.story_id for i in test}
        assert len(train_stories) == 2
        assert len(test_stories) == 8

    def test_story_disjoint_and_covering(self):
        instances = self.make_instances(13, per_story=3)
        train, test = split_iid(instances, seed=5)
        train_stories = {i.story_id for i in train}
        test_stories = {i.story_id for i in test}
        assert train_stories.isdisjoint(test_stories)
        assert train_stories | test_stories == {i.story_id for i in instances}
        assert len(train) + len(test) == len(instances)

    def test_deterministic_per_seed(self):
        instances = self.make_instances(20)
        assert split_iid(instances, seed=7) == split_iid(instances, seed=7)
        assert split_iid(instances, seed=7) != split_iid(instances, seed=8)

    def test_single_story_degenerate(self, caplog):
        instances = self.make_instances(1)
        with caplog.at_level(logging.WARNING, logger="temprel.evaluation"):
            train, test = split_iid(instances, seed=1)
        assert len(train) == len(instances)
        assert test == []
        assert any("degenerate" in r.message for r in caplog.records)

    def test_ceiling_rule(self):
        instances = self.make_instances(11)
        train, _ = split_iid(instances, seed=3, train_ratio=0.2)
        assert len({i.story_id for i in train}) == 3  # ceil(2.2)


class TestComputeMetrics:
    def two_story_fixture(self):
        instances = [
            instance("A", "starts"),
            instance("A", "ends"),
            instance("B", "starts"),
            instance("B", "ends"),
        ]
        golds = [i.gold for i in instances]
        # story A fully correct; story B correct on start only
        predictions = [
            golds[0],
            golds[1],
            golds[2],
            Label.CONTRADICTION if golds[3] is Label.ENTAILMENT else Label.ENTAILMENT,
        ]
        return predictions, golds, instances

    def test_all_correct(self):
        instances = [instance("A", "starts"), instance("A", "ends")]
        golds = [i.gold for i in instances]
        report = compute_metrics(golds, golds, instances)
        assert (report.start_accuracy, report.end_accuracy) == (1.0, 1.0)
        assert (report.all_accuracy, report.story_exact_match) == (1.0, 1.0)

    def test_two_story_hand_count(self):
        predictions, golds, instances = self.two_story_fixture()
        report = compute_metrics(predictions, golds, instances)
        assert report.start_accuracy == 1.0
        assert report.end_accuracy == 0.5
        assert report.all_accuracy == 0.75
        assert report.story_exact_match == 0.5

    def test_golds_default_to_instance_labels(self):
        predictions, _, instances = self.two_story_fixture()
        report = compute_metrics(predictions, None, instances)
        assert report.all_accuracy == 0.75

    def test_empty_slice_is_none_not_zero(self):
        instances = [instance("A", "starts")]
        report = compute_metrics([instances[0].gold], None, instances)
        assert report.end_accuracy is None
        assert report.start_accuracy == 1.0

    def test_story_em_omitted_without_story_ids(self):
        items = [
            parse_instance_record(record(story_id="", hypothesis="X starts before Y."))
        ]
        report = compute_metrics([items[0].gold], None, items)
        assert report.story_exact_match is None

    def test_length_mismatch(self):
        instances = [instance()]
        with pytest.raises(ValueError, match="length mismatch"):
            compute_metrics([], None, instances)

    def test_story_em_never_exceeds_all_accuracy(self):
        import random

        rng = random.Random(99)
        instances = [
            instance(f"s{story}", comparator)
            for story in range(5)
            for comparator in ("starts", "ends")
        ]
        golds = [i.gold for i in instances]
        for _ in range(100):
            predictions = [
                gold if rng.random() < 0.5 else
                (Label.CONTRADICTION if gold is Label.ENTAILMENT else Label.ENTAILMENT)
                for gold in golds
            ]
            report = compute_metrics(predictions, golds, instances)
            assert report.story_exact_match <= report.all_accuracy + 1e-12

    def test_all_accuracy_is_weighted_mean(self):
        predictions, golds, instances = self.two_story_fixture()
        report = compute_metrics(predictions, golds, instances)
        weighted = (
            report.start_accuracy * report.n_start + report.end_accuracy * report.n_end
        ) / (report.n_start + report.n_end)
        assert report.all_accuracy == pytest.approx(weighted)

    def test_table_alignment(self):
        predictions, golds, instances = self.two_story_fixture()
        table = compute_metrics(predictions, golds, instances).table()
        lines = table.splitlines()
        assert len(lines) == 5
        assert len({len(line) for line in lines}) == 1  # rectangular
        assert "0.7500" in table


class TestReportFiles:
    def test_write_report(self, tmp_path):
        report = MetricsReport(
            start_accuracy=1.0, end_accuracy=0.5, all_accuracy=0.75,
            story_exact_match=0.5, n_start=2, n_end=2,
            correct_start=2, correct_end=1, n_stories=2, n_stories_all_correct=1,
        )
        from temprel.report import write_report

        paths = write_report(report, tmp_path / "out")
        names = {p.name for p in paths}
        assert names == {"metrics.json", "metrics.tsv", "accuracy.png", "counts.png"}
        for path in paths:
            assert path.exists() and path.stat().st_size > 0
        parsed = json.loads((tmp_path / "out" / "metrics.json").read_text())
        assert parsed["all_accuracy"] == 0.75
        tsv = (tmp_path / "out" / "metrics.tsv").read_text()
        assert tsv.splitlines()[0] == "slice\tcorrect\ttotal\taccuracy"
        assert "story\t1\t2\t0.500000" in tsv
