"""Figures for corpus statistics, rendered to image files."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .history import CATEGORIES  # noqa: E402

COLORS = {"Correct": "#4c9a5b", "Incorrect": "#c8553d"}
# fixed metadata keeps repeated renders byte-identical
_METADATA = {"Software": None}


def plot_categories(doc: dict, path) -> Path:
    """Horizontal stacked bars: submissions per history category and outcome."""
    fig, ax = plt.subplots(figsize=(7, 3.2))
    left = [0] * len(CATEGORIES)
    for outcome in ("Correct", "Incorrect"):
        values = [doc["categories"][c][outcome] for c in CATEGORIES]
        ax.barh(CATEGORIES, values, left=left, color=COLORS[outcome], label=outcome)
        left = [a + b for a, b in zip(left, values)]
    ax.invert_yaxis()
    ax.set_xlabel("submissions")
    ax.set_title(f"Submission categories (n = {doc['submissions']})")
    ax.legend(loc="lower right", frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def plot_assignments(doc: dict, path) -> Path:
    """Grouped bars of correct and incorrect submissions per assignment."""
    rows = doc["assignments"]
    names = [r["assignment"] for r in rows]
    xs = range(len(rows))
    width = 0.38
    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(rows) + 2), 3.2))
    ax.bar([x - width / 2 for x in xs], [r["correct"] for r in rows], width,
           color=COLORS["Correct"], label="Correct")
    ax.bar([x + width / 2 for x in xs], [r["incorrect"] for r in rows], width,
           color=COLORS["Incorrect"], label="Incorrect")
    ax.set_xticks(list(xs), names)
    ax.set_ylabel("submissions")
    ax.set_title("Outcomes per assignment")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, metadata=_METADATA)
    plt.close(fig)
    return path


def render_figures(doc: dict, directory) -> list:
    directory = Path(directory)
    return [plot_categories(doc, directory / "categories.png"),
            plot_assignments(doc, directory / "assignments.png")]
