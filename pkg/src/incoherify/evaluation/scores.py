"""
Score tables (model scores next to human judgments), their TSV format, and the statistics the
evaluation reports: Spearman rank correlation and thresholded accuracy.

A score table file has a header row and the columns
`conversation_id`, `model_score`, `human_scores` (comma-separated) and `aspect`.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from enum import StrEnum
from pathlib import Path
from typing import Annotated

import numpy as np
import polars as pl
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from scipy.stats import rankdata

from incoherify.dialogue.model import Label
from incoherify.errors import ScoreTableError

__all__ = [
    "SCORE_COLUMNS",
    "Aspect",
    "Benchmark",
    "ScoreRow",
    "ScoreTable",
    "accuracy",
    "aggregate_annotations",
    "attach_annotations",
    "correlation_report",
    "read_annotations",
    "read_model_scores",
    "read_score_table",
    "spearman",
    "write_model_scores",
    "write_score_table",
]

logger = logging.getLogger(__name__)

SCORE_COLUMNS = ("conversation_id", "model_score", "human_scores", "aspect")


class Aspect(StrEnum):
    COHERENCE = "coherence"
    OVERALL = "overall"


class Benchmark(StrEnum):
    """Human-judgment benchmarks, which fix the rating scale of each aspect."""

    FED = "fed"
    DSTC9 = "dstc9"

    def score_range(self, aspect: Aspect) -> tuple[float, float]:
        return _RANGES[self][aspect]


_RANGES: dict[Benchmark, dict[Aspect, tuple[float, float]]] = {
    Benchmark.FED: {Aspect.COHERENCE: (0.0, 2.0), Aspect.OVERALL: (0.0, 4.0)},
    Benchmark.DSTC9: {Aspect.COHERENCE: (1.0, 3.0), Aspect.OVERALL: (1.0, 5.0)},
}


class ScoreRow(BaseModel):
    conversation_id: Annotated[str, Field(min_length=1)]
    model_score: float
    human_scores: Annotated[tuple[float, ...], Field(min_length=1)]
    aspect: Aspect = Aspect.COHERENCE

    model_config = ConfigDict(frozen=True)

    @property
    def human_mean(self) -> float:
        return float(np.mean(self.human_scores))


class ScoreTable(BaseModel):
    """
    Rows of model and human scores. A conversation appears at most once per aspect; when a
    `benchmark` is set, every human score must lie in that benchmark's range for the row's
    aspect.
    """

    rows: tuple[ScoreRow, ...] = ()
    benchmark: Benchmark | None = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check(self) -> ScoreTable:
        seen: set[tuple[str, Aspect]] = set()
        for row in self.rows:
            key = (row.conversation_id, row.aspect)
            if key in seen:
                raise ValueError(
                    f"conversation {row.conversation_id!r} appears twice for {row.aspect!s}"
                )
            seen.add(key)
            if self.benchmark is not None:
                lo, hi = self.benchmark.score_range(row.aspect)
                bad = [s for s in row.human_scores if not lo <= s <= hi]
                if bad:
                    raise ValueError(
                        f"{row.conversation_id!r}: {row.aspect!s} scores {bad} outside "
                        f"[{lo:g}, {hi:g}] for {self.benchmark!s}"
                    )
        return self

    def __len__(self) -> int:
        return len(self.rows)

    def aspects(self) -> list[Aspect]:
        return sorted({r.aspect for r in self.rows})

    def for_aspect(self, aspect: Aspect) -> list[ScoreRow]:
        return [r for r in self.rows if r.aspect == aspect]

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame(
            {
                "conversation_id": [r.conversation_id for r in self.rows],
                "model_score": [r.model_score for r in self.rows],
                "human_scores": [
                    ",".join(repr(s) for s in r.human_scores) for r in self.rows
                ],
                "aspect": [str(r.aspect) for r in self.rows],
            },
            schema={c: pl.Float64 if c == "model_score" else pl.Utf8 for c in SCORE_COLUMNS},
        )


def _table(rows: Iterable[ScoreRow], benchmark: Benchmark | None) -> ScoreTable:
    try:
        return ScoreTable(rows=tuple(rows), benchmark=benchmark)
    except ValidationError as e:
        raise ScoreTableError(e.errors()[0]["msg"]) from e


def _parse_scores(raw: str, conversation_id: str) -> tuple[float, ...]:
    try:
        scores = tuple(float(s) for s in raw.split(",") if s.strip())
    except ValueError as e:
        raise ScoreTableError(f"{conversation_id!r}: bad human scores {raw!r}") from e
    if not scores:
        raise ScoreTableError(f"{conversation_id!r}: no human scores")
    return scores


def _read_tsv(path: Path, required: Sequence[str]) -> pl.DataFrame:
    try:
        df = pl.read_csv(path, separator="\t", infer_schema=False, quote_char=None)
    except pl.exceptions.PolarsError as e:
        raise ScoreTableError(f"'{path}' is not a readable TSV: {e}") from e
    missing = [c for c in required if c not in df.columns]
    if missing:
        raise ScoreTableError(f"'{path}' is missing column(s) {missing}")
    return df


def _frame_rows(df: pl.DataFrame) -> list[ScoreRow]:
    rows = []
    for rec in df.iter_rows(named=True):
        cid = rec["conversation_id"]
        try:
            rows.append(
                ScoreRow(
                    conversation_id=cid,
                    model_score=float(rec["model_score"]),
                    human_scores=_parse_scores(rec["human_scores"], cid),
                    aspect=rec.get("aspect") or Aspect.COHERENCE,
                )
            )
        except (ValidationError, TypeError, ValueError) as e:
            if isinstance(e, ScoreTableError):
                raise
            raise ScoreTableError(f"{cid!r}: {e}") from e
    return rows


def read_score_table(path: Path, benchmark: Benchmark | None = None) -> ScoreTable:
    """
    Raises:
        ScoreTableError: a column is missing, a value does not parse, an id repeats within an
            aspect, or a human score is outside the `benchmark` range
    """
    df = _read_tsv(Path(path), SCORE_COLUMNS)
    return _table(_frame_rows(df), benchmark)


def write_score_table(table: ScoreTable, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_frame().write_csv(path, separator="\t")


def write_model_scores(scores: Mapping[str, float], path: Path) -> None:
    """Writes a two-column `conversation_id`, `model_score` TSV (no human judgments)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pl.DataFrame(
        {"conversation_id": list(scores), "model_score": list(scores.values())},
        schema={"conversation_id": pl.Utf8, "model_score": pl.Float64},
    ).write_csv(path, separator="\t")


def read_model_scores(path: Path) -> dict[str, float]:
    df = _read_tsv(Path(path), ("conversation_id", "model_score"))
    try:
        return {
            cid: float(s)
            for cid, s in zip(df["conversation_id"], df["model_score"], strict=True)
        }
    except (TypeError, ValueError) as e:
        raise ScoreTableError(f"'{path}': bad model score ({e})") from e


def attach_annotations(
    model_scores: Mapping[str, float],
    annotations: pl.DataFrame,
    benchmark: Benchmark | None = None,
) -> ScoreTable:
    """
    Joins model scores with human judgments on `conversation_id`.

    Args:
        model_scores (Mapping[str, float]): conversation id to model score
        annotations (pl.DataFrame): `conversation_id`, `human_scores` (comma-separated string)
            and optionally `aspect` columns, one row per conversation and aspect
        benchmark (Benchmark | None): validates human scores against its ranges

    Returns:
        (ScoreTable): one row per annotation that has a model score, in annotation order

    """
    missing = [c for c in ("conversation_id", "human_scores") if c not in annotations.columns]
    if missing:
        raise ScoreTableError(f"annotations are missing column(s) {missing}")
    if "aspect" not in annotations.columns:
        annotations = annotations.with_columns(aspect=pl.lit(str(Aspect.COHERENCE)))
    scores = pl.DataFrame(
        {"conversation_id": list(model_scores), "model_score": list(model_scores.values())},
        schema={"conversation_id": pl.Utf8, "model_score": pl.Float64},
    )
    joined = annotations.select(
        pl.col("conversation_id").cast(pl.Utf8),
        pl.col("human_scores").cast(pl.Utf8),
        pl.col("aspect").cast(pl.Utf8),
    ).join(scores, on="conversation_id", how="inner", maintain_order="left")
    dropped = annotations.height - joined.height
    if dropped:
        logger.warning(f"{dropped} annotation row(s) have no model score and were dropped")
    return _table(_frame_rows(joined), benchmark)


def read_annotations(path: Path) -> pl.DataFrame:
    return _read_tsv(Path(path), ("conversation_id", "human_scores"))


def aggregate_annotations(table: ScoreTable) -> ScoreTable:
    """
    Replaces each row's human scores by their arithmetic mean.

    Raises:
        ValueError: `table` is empty

    """
    if not table.rows:
        raise ValueError("cannot aggregate an empty score table")
    rows = [r.model_copy(update={"human_scores": (r.human_mean,)}) for r in table.rows]
    return ScoreTable(rows=tuple(rows), benchmark=table.benchmark)


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """
    Spearman's rho: the Pearson correlation of the average ranks of `xs` and `ys` (tied values
    share the mean of the ranks they span).

    Returns:
        (float | None): rho in [-1, 1], or `None` when either side is constant and rho is
            undefined

    Raises:
        ValueError: lengths differ or fewer than two pairs

    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValueError("spearman needs at least two pairs")
    rx = rankdata(x, method="average")
    ry = rankdata(y, method="average")
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    denom = np.sqrt((dx @ dx) * (dy @ dy))
    if denom == 0:
        return None
    return float(np.clip((dx @ dy) / denom, -1.0, 1.0))


def _is_coherent(label: Label | bool | str | None) -> bool:
    if isinstance(label, bool):
        return label
    if label is None:
        raise ValueError("accuracy needs a label for every row")
    return Label(label) == Label.COHERENT


def accuracy(
    scores: Sequence[float],
    labels: Sequence[Label | bool | str | None],
    threshold: float = 0.5,
) -> float:
    """
    Share of rows where `score >= threshold` agrees with the label being coherent.

    Raises:
        ValueError: lengths differ, no rows, or a missing label

    """
    if len(scores) != len(labels):
        raise ValueError(f"length mismatch: {len(scores)} scores vs {len(labels)} labels")
    if not scores:
        raise ValueError("accuracy needs at least one row")
    predicted = np.asarray(scores, dtype=np.float64) >= threshold
    actual = np.array([_is_coherent(lab) for lab in labels])
    return float(np.mean(predicted == actual))


def correlation_report(table: ScoreTable) -> pl.DataFrame:
    """
    Spearman correlation between model scores and mean human scores, per aspect.

    Returns:
        (pl.DataFrame): columns `aspect`, `n`, `spearman`; `spearman` is null where rho is
            undefined (constant scores or fewer than two rows)

    """
    aspects, counts, rhos = [], [], []
    for aspect in table.aspects():
        rows = table.for_aspect(aspect)
        rho = None
        if len(rows) >= 2:
            rho = spearman([r.model_score for r in rows], [r.human_mean for r in rows])
        if rho is None:
            logger.warning(f"Spearman correlation for {aspect!s} is undefined ({len(rows)} row(s))")
        aspects.append(str(aspect))
        counts.append(len(rows))
        rhos.append(rho)
    return pl.DataFrame(
        {"aspect": aspects, "n": counts, "spearman": rhos},
        schema={"aspect": pl.Utf8, "n": pl.Int64, "spearman": pl.Float64},
    )
