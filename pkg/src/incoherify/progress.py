"""
Progress reporting for long pipeline stages. A caller embedding incoherify can pass an
`on_progress` callback to `IncoherifyPipeline` methods instead of scraping log lines. Callbacks
always run in the parent process, never inside a `--jobs` worker.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import Literal

__all__ = ["ProgressCallback", "ProgressEvent", "Stage"]

Stage = Literal["manipulate", "train", "score", "matrix"]


@dataclass(frozen=True)
class ProgressEvent:
    """One unit of work finishing."""

    stage: Stage
    """Pipeline stage reporting."""

    completed: int
    """Units finished so far in this stage, this one included."""

    total: int | None
    """Units this stage will process, or `None` while streaming input of unknown length."""

    detail: str
    """Identifier of the unit that finished (a conversation id, an epoch, a matrix cell)."""


ProgressCallback = Callable[[ProgressEvent], None]
"""Invoked once per completed unit. Exceptions propagate and abort the stage."""
