"""OVERVIEW:
SVG rendering with matplotlib (Agg backend, no display, no external services).

- sweep_curve_svg    → median MCC with a q1..q3 band against r or R
- scatter_svg        → per-seed standard MCC (x) vs flat MCC (y), marginal
                       medians as faint guide lines, faint y = x diagonal
- bucket_heatmap_svg → lower-triangular grid of bucket-pair MCCs

Heatmaps use a linear grayscale over [0, 1], darker = higher MCC; negative
values are drawn as 0 and degenerate cells are left blank. Output is
byte-stable: a fixed svg.hashsalt and no creation date in the metadata.
"""

from pathlib import Path
from statistics import median
from typing import List, Sequence, Union

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams.update(
    {
        "font.family": "DejaVu Sans",
        "axes.unicode_minus": False,
        "svg.hashsalt": "flatmod",
        "svg.fonttype": "none",
    }
)
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from src.models.eval_models import BucketMatrix  # noqa: E402

SVG_METADATA = {"Date": None}


def _save(fig, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(target, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    return target


def sweep_curve_svg(path: Union[str, Path], params: Sequence[float], q1: Sequence[float],
                    medians: Sequence[float], q3: Sequence[float], xlabel: str, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 3.8), constrained_layout=True)
    ax.fill_between(params, q1, q3, color="0.8", label="1/4-ile .. 3/4-ile")
    ax.plot(params, medians, color="black", marker="o", markersize=2.5, linewidth=1.2, label="median")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("MCC")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def scatter_svg(path: Union[str, Path], x: Sequence[float], y: Sequence[float],
                xlabel: str, ylabel: str, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(5.0, 5.0), constrained_layout=True)
    values = list(x) + list(y)
    lo = min(0.0, min(values)) if values else 0.0
    hi = max(1.0, max(values)) if values else 1.0
    ax.plot([lo, hi], [lo, hi], color="0.75", linewidth=0.8)
    if x:
        ax.axvline(median(x), color="0.75", linewidth=0.8)
        ax.axhline(median(y), color="0.75", linewidth=0.8)
    ax.scatter(x, y, s=6, color="black")
    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return _save(fig, path)


def heatmap_values(matrix: BucketMatrix) -> np.ndarray:
    """K×K array: clamped MCC for i >= j, NaN above the diagonal and for degenerate cells"""
    count = len(matrix.buckets)
    grid = np.full((count, count), np.nan)
    for i, j in matrix.rows():
        confusion = matrix.confusion(i, j)
        if not confusion.degenerate:
            grid[i, j] = min(1.0, max(0.0, confusion.mcc()))
    return grid


def bucket_heatmap_svg(path: Union[str, Path], matrix: BucketMatrix, title: str) -> Path:
    grid = heatmap_values(matrix)
    labels: List[str] = [f"{b.lo}" if b.lo == b.hi else f"{b.lo}-{b.hi}" for b in matrix.buckets]
    fig, ax = plt.subplots(figsize=(5.5, 5.0), constrained_layout=True)
    image = ax.imshow(np.ma.masked_invalid(grid), cmap="Greys", vmin=0.0, vmax=1.0, interpolation="nearest")
    ax.set_xticks(range(len(labels)))
    ax.set_yticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    ax.set_yticklabels(labels, fontsize=6)
    ax.set_xlabel("degree bucket")
    ax.set_ylabel("degree bucket")
    ax.set_title(title)
    fig.colorbar(image, ax=ax, label="MCC")
    return _save(fig, path)
