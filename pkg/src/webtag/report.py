"""Report rendering: delimited metric output plus matplotlib figures.

Every eval run writes a JSON report, a plot-ready CSV of metric rows, a
plain-text summary table, and PNG curves of each metric against k.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluate import TimingReport
from .experiments import EvalReport

_MARKERS = ("o", "s", "^", "d", "v", "x")


def write_report_json(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def write_metrics_csv(report: EvalReport, path: str | Path) -> None:
    """One row per (method, variant, [n,] k, metric)."""
    has_n = any("n" in row for row in report.rows)
    fieldnames = ["method", "variant"] + (["n"] if has_n else []) + ["k", "metric", "value"]
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in report.rows:
            writer.writerow({name: row.get(name, "") for name in fieldnames})


def format_text_table(report: EvalReport) -> str:
    """Fixed-width table of metric values by k, grouped per method/variant."""
    k_values = sorted({row["k"] for row in report.rows})
    groups: dict[tuple, dict[int, float]] = {}
    for row in report.rows:
        key = (row["method"], row["variant"], row.get("n"), row["metric"])
        groups.setdefault(key, {})[row["k"]] = row["value"]

    label_width = max(
        (len(_group_label(key)) for key in groups), default=10
    )
    header = "".join(f"{'k=' + str(k):>9}" for k in k_values)
    lines = [f"{'':<{label_width}}{header}"]
    for key in sorted(groups, key=lambda item: tuple(str(x) for x in item)):
        cells = "".join(
            f"{groups[key].get(k, float('nan')):>9.3f}" for k in k_values
        )
        lines.append(f"{_group_label(key):<{label_width}}{cells}")
    return "\n".join(lines) + "\n"


def _group_label(key: tuple) -> str:
    method, variant, n, metric = key
    label = f"{method}/{variant}/{metric}"
    if n is not None:
        label += f"/n={n}"
    return label


def write_text_table(report: EvalReport, path: str | Path) -> None:
    Path(path).write_text(format_text_table(report), encoding="utf-8")


def render_metric_figures(report: EvalReport, outdir: str | Path) -> list[Path]:
    """One figure per (method, metric): value against k, one curve per
    variant (or per n for sweep reports). Returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    panels: dict[tuple[str, str], dict[str, dict[int, float]]] = {}
    for row in report.rows:
        panel = (row["method"], row["metric"])
        curve = f"n={row['n']}" if "n" in row else row["variant"]
        panels.setdefault(panel, {}).setdefault(curve, {})[row["k"]] = row["value"]

    for (method, metric), curves in sorted(panels.items()):
        fig, ax = plt.subplots(figsize=(6, 4))
        for i, (curve, points) in enumerate(sorted(curves.items())):
            ks = sorted(points)
            ax.plot(
                ks,
                [points[k] for k in ks],
                marker=_MARKERS[i % len(_MARKERS)],
                label=curve,
            )
        ax.set_xlabel("k")
        ax.set_ylabel(f"{metric}@k")
        ax.set_title(f"{method}: {metric}@k")
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = outdir / f"{report.task}_{method}_{metric}.png".replace("/", "-")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def render_timing_figure(timing: TimingReport, path: str | Path) -> Path:
    """Grouped bars of per-stage seconds for the two pipelines."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = ["expand", "generate", "denoise"]
    context = [timing.context_stages.get(s, 0.0) for s in labels]
    fulltext = [timing.fulltext_stages.get(s, 0.0) for s in labels]
    x = range(len(labels))
    width = 0.38
    ax.bar([i - width / 2 for i in x], context, width, label="expanded context")
    ax.bar([i + width / 2 for i in x], fulltext, width, label="full text")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels)
    ax.set_ylabel("seconds")
    ax.set_title(
        f"tagging wall-clock (full-text / context = {timing.speedup:.2f}x)"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_timing_json(timing: TimingReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(timing.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
