"""Render harness results as figures, written next to the CSV output."""

from __future__ import annotations

from pathlib import Path
from typing import Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .harness import FIELD_ORDER, BulkRunSummary, SnapshotStats, subset_bitmask
from .model import SourceDatabase

_SHORT = {
    SourceDatabase.DBLP: "DBLP",
    SourceDatabase.CROSSREF_CROSSCITE: "CrossRef",
    SourceDatabase.SEMANTIC_SCHOLAR: "S2",
    SourceDatabase.OPENALEX: "OpenAlex",
}


def save_snapshot_overview(stats: SnapshotStats, path: Union[str, Path]) -> Path:
    """Horizontal bars: preprints per field, with the share lacking
    publication info highlighted and annotated."""
    fields = [f for f in FIELD_ORDER if f in stats.per_field]
    fields += sorted(set(stats.per_field) - set(FIELD_ORDER))
    totals = [stats.per_field[f].preprint_count for f in fields]
    missing = [stats.per_field[f].count_without_publication_info for f in fields]

    fig, ax = plt.subplots(figsize=(8, 0.5 * max(len(fields), 4) + 1.5))
    y = range(len(fields))
    ax.barh(y, totals, color="#c8d6e5", label="all preprints")
    ax.barh(y, missing, color="#ee5253", label="no publication info")
    for i, f in enumerate(fields):
        row = stats.per_field[f]
        ax.annotate(
            f"{row.ratio_without_info * 100:.2f}%",
            xy=(row.preprint_count, i),
            xytext=(4, 0),
            textcoords="offset points",
            va="center",
            fontsize=8,
        )
    ax.set_yticks(list(y))
    ax.set_yticklabels(fields)
    ax.invert_yaxis()
    ax.set_xlabel("preprints")
    ax.set_title("Preprints per research field and share without publication info")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_subset_breakdown(summary: BulkRunSummary, path: Union[str, Path]) -> Path:
    """Database-subset decomposition of the resolved preprints, one bar
    per non-empty subset (the 4-set diagram rendered as bars)."""
    cells = sorted(summary.venn.items(), key=lambda item: (-item[1], subset_bitmask(item[0])))
    labels = [
        " + ".join(_SHORT[db] for db in SourceDatabase if db in subset) for subset, _ in cells
    ]
    counts = [count for _, count in cells]

    fig, ax = plt.subplots(figsize=(8, 0.4 * max(len(cells), 4) + 1.5))
    y = range(len(cells))
    ax.barh(y, counts, color="#576574")
    for i, count in enumerate(counts):
        ax.annotate(str(count), xy=(count, i), xytext=(4, 0), textcoords="offset points", va="center", fontsize=8)
    ax.set_yticks(list(y))
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("resolved preprints")
    resolved = summary.overall_resolved
    total = summary.sample_size
    ax.set_title(f"Database contributions ({resolved}/{total} resolved)")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_per_year_rates(summary: BulkRunSummary, path: Union[str, Path]) -> Path:
    """Sample size per first-submission year (bars) and resolving rate
    (line, right axis)."""
    years = sorted(summary.per_year)
    sampled = [summary.per_year[y][0] for y in years]
    rates = [
        summary.per_year[y][1] / summary.per_year[y][0] * 100 if summary.per_year[y][0] else 0.0
        for y in years
    ]

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(years, sampled, color="#c8d6e5", label="preprints in sample")
    ax.set_xlabel("first-submission year")
    ax.set_ylabel("preprints")
    ax2 = ax.twinx()
    ax2.plot(years, rates, color="#ee5253", marker="o", label="resolving rate")
    ax2.set_ylabel("resolving rate [%]")
    ax2.set_ylim(0, 105)
    lines, labels = ax.get_legend_handles_labels()
    lines2, labels2 = ax2.get_legend_handles_labels()
    ax.legend(lines + lines2, labels + labels2, loc="upper left", fontsize=8)
    ax.set_title("Sample size and resolving rate per year")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
