"""
Heatmap rendering of a cross-manipulation accuracy matrix (training sets down, test sets
across), saved with matplotlib.
"""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib
import matplotlib.pyplot as plt
import polars as pl

from incoherify.evaluation.matrix import ROW_HEADER

__all__ = ["render_heatmap"]

logger = logging.getLogger(__name__)

# Batch rendering only; skip pyplot's interactive backend probing.
matplotlib.use("Agg")


def render_heatmap(
    matrix: pl.DataFrame,
    path: Path,
    title: str = "Accuracy by training and test manipulation",
    dpi: int = 150,
) -> Path:
    """
    Draws `matrix` as an annotated heatmap on a fixed [0, 1] colour scale.

    Args:
        matrix (pl.DataFrame): output of `cross_manipulation_matrix`
        path (Path): image path; the suffix picks the format
        title (str): axes title
        dpi (int): resolution for raster formats

    Returns:
        (Path): `path`

    """
    path = Path(path)
    rows = matrix[ROW_HEADER].to_list()
    cols = [c for c in matrix.columns if c != ROW_HEADER]
    values = matrix.select(cols).to_numpy()

    fig, ax = plt.subplots(figsize=(1.2 * len(cols) + 2.5, 1.0 * len(rows) + 1.5))
    image = ax.imshow(values, vmin=0.0, vmax=1.0, cmap="viridis")
    ax.set_xticks(range(len(cols)), labels=cols, rotation=30, ha="right")
    ax.set_yticks(range(len(rows)), labels=rows)
    ax.set_xlabel("test")
    ax.set_ylabel("train")
    ax.set_title(title)
    for i in range(len(rows)):
        for j in range(len(cols)):
            v = values[i, j]
            ax.text(j, i, f"{v:.2f}", ha="center", va="center", color="w" if v < 0.6 else "k")
    fig.colorbar(image, ax=ax, label="accuracy")
    fig.tight_layout()

    path.parent.mkdir(parents=True, exist_ok=True)
    logger.info(f"Saving heatmap to '{path}'")
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path
