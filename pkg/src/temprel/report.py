"""Report rendering: machine-readable record, delimited table, and figures.

Given a MetricsReport, `write_report` drops four files into a directory:

    metrics.json    full record
    metrics.tsv     one row per slice (tab-delimited)
    accuracy.png    per-slice accuracy bars
    counts.png      correct/incorrect counts per comparator slice
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import MetricsReport

__all__ = ["write_report", "accuracy_figure", "counts_figure"]


def accuracy_figure(report: MetricsReport):
    rows = [(name, acc) for name, _, _, acc in report.rows() if acc is not None]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    if rows:
        names, values = zip(*rows)
        bars = ax.bar(names, values, color="#4878d0", width=0.6)
        ax.bar_label(bars, fmt="%.3f", padding=2, fontsize=9)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("accuracy")
    ax.set_title("Accuracy by slice")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    return fig


def counts_figure(report: MetricsReport):
    names = ["start", "end"]
    correct = [report.correct_start, report.correct_end]
    wrong = [report.n_start - report.correct_start, report.n_end - report.correct_end]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    bars_correct = ax.bar(names, correct, color="#6acc64", width=0.6, label="correct")
    ax.bar(names, wrong, bottom=correct, color="#d65f5f", width=0.6, label="incorrect")
    ax.bar_label(bars_correct, labels=[str(c) for c in correct], label_type="center", fontsize=9)
    ax.set_ylabel("instances")
    ax.set_title("Predictions by comparator")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def _tsv(report: MetricsReport) -> str:
    lines = ["slice\tcorrect\ttotal\taccuracy"]
    for name, correct, total, accuracy in report.rows():
        lines.append(
            "\t".join(
                [
                    name,
                    "" if correct is None else str(correct),
                    "" if total is None else str(total),
                    "" if accuracy is None else f"{accuracy:.6f}",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_report(report: MetricsReport, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out_dir / "metrics.json"
    json_path.write_text(json.dumps(report.to_record(), indent=2) + "\n", encoding="utf-8")
    written.append(json_path)

    tsv_path = out_dir / "metrics.tsv"
    tsv_path.write_text(_tsv(report), encoding="utf-8")
    written.append(tsv_path)

    for name, figure in (
        ("accuracy.png", accuracy_figure(report)),
        ("counts.png", counts_figure(report)),
    ):
        path = out_dir / name
        figure.savefig(path, dpi=150)
        plt.close(figure)
        written.append(path)
    return written
