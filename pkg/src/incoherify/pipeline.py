"""
Top-level pipeline API: manipulate -> generate dataset -> train proxy -> score -> cross
matrix. `IncoherifyPipeline` is the single implementation behind the `incoherify` CLI
(`incoherify.cli`) and direct Python callers.

Per-conversation work (building a negative) runs in a `ProcessPoolExecutor` when `jobs > 1`.
Input is consumed in fixed-size chunks and results come back in input order, and every
conversation seeds its own rng, so output is byte-identical for any `jobs`.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from itertools import batched
from typing import Any, NamedTuple

import polars as pl
from pydantic import BaseModel, ConfigDict, Field

from incoherify.config import IncoherifyConfig, ManipulationMode
from incoherify.dialogue.model import Conversation, Label
from incoherify.errors import NotApplicableError
from incoherify.evaluation.matrix import check_balance, cross_manipulation_matrix
from incoherify.knowledge import AntonymLexicon, bundled_lexicon
from incoherify.log import worker_init as _init_worker_logging
from incoherify.log import worker_log_queue
from incoherify.manipulate import apply_baseline, apply_pipeline, harvest_concepts
from incoherify.progress import ProgressCallback, ProgressEvent
from incoherify.proxy import LinearModel, score, train

__all__ = ["NEGATIVE_SUFFIX", "IncoherifyPipeline"]

logger = logging.getLogger(__name__)

NEGATIVE_SUFFIX = "::neg"
"""Appended to a positive's id to name the negative built from it in a generated dataset."""


class _Task(NamedTuple):
    mode: ManipulationMode
    config: IncoherifyConfig
    seed: int
    lexicon: AntonymLexicon
    donor_pool: tuple[str, ...]
    corpus: tuple[Conversation, ...]
    fallback: bool


# Per-process global set by `_init_worker`: everything a worker needs to build negatives.
_worker_task: _Task | None = None


def _init_worker(task: _Task) -> None:
    global _worker_task
    _worker_task = task


def _init_worker_with_logging(task: _Task, log_queue: Any, log_level: int) -> None:
    _init_worker_logging(log_queue, log_level)
    _init_worker(task)


def _baseline(task: _Task, conversation: Conversation) -> Conversation | None:
    try:
        result, _ = apply_baseline(conversation, task.corpus, task.config.baseline, task.seed)
    except NotApplicableError as e:
        logger.debug(f"{conversation.id}: {e}")
        return None
    return result


def _negative(conversation: Conversation) -> Conversation | None:
    """The incoherent counterpart of `conversation`, or `None` when nothing applies."""
    task = _worker_task
    assert task is not None
    if task.mode == ManipulationMode.BASELINE:
        return _baseline(task, conversation)
    if conversation.label == Label.INCOHERENT:
        logger.warning(f"{conversation.id}: already labeled incoherent; left unchanged")
        return None
    result, record = apply_pipeline(
        conversation,
        task.config.manipulation,
        task.seed,
        lexicon=task.lexicon,
        donor_pool=task.donor_pool,
    )
    if record.steps:
        return result
    if task.fallback:
        logger.info(f"{conversation.id}: falling back to a baseline negative")
        return _baseline(task, conversation)
    return None


class IncoherifyPipeline(BaseModel):
    """
    Runs the incoherify stages with one configuration. Methods take and return in-memory
    values; reading and writing corpora is left to the caller (see `incoherify.dialogue`).
    """

    config: IncoherifyConfig = IncoherifyConfig()

    jobs: int = Field(default=1, ge=1)
    """Worker processes used to build negatives. `1` runs in this process."""

    chunk_size: int = Field(default=256, ge=1)
    """Conversations handed to the pool per round trip."""

    lexicon: AntonymLexicon | None = None
    """Contradiction lexicon; the bundled one when unset."""

    model_config = ConfigDict(frozen=True)

    def _task(
        self,
        mode: ManipulationMode,
        seed: int,
        corpus: Sequence[Conversation],
        fallback: bool,
    ) -> _Task:
        donor_pool: tuple[str, ...] = ()
        if mode == ManipulationMode.SEMANTIC and self.config.manipulation.cross_conversation:
            donor_pool = tuple(harvest_concepts(corpus))
            logger.info(f"Collected {len(donor_pool)} donor concept(s) from the corpus")
        return _Task(
            mode=mode,
            config=self.config,
            seed=seed,
            lexicon=self.lexicon if self.lexicon is not None else bundled_lexicon(),
            donor_pool=donor_pool,
            corpus=tuple(corpus),
            fallback=fallback,
        )

    def _map_negatives(
        self, task: _Task, conversations: Iterable[Conversation]
    ) -> Iterator[tuple[Conversation, Conversation | None]]:
        if self.jobs == 1:
            _init_worker(task)
            for conversation in conversations:
                yield conversation, _negative(conversation)
            return
        with (
            worker_log_queue() as (log_queue, log_level),
            ProcessPoolExecutor(
                max_workers=self.jobs,
                initializer=_init_worker_with_logging,
                initargs=(task, log_queue, log_level),
            ) as executor,
        ):
            for chunk in batched(conversations, self.chunk_size):
                yield from zip(chunk, executor.map(_negative, chunk), strict=True)

    def _needs_corpus(self, mode: ManipulationMode) -> bool:
        return mode == ManipulationMode.BASELINE or self.config.manipulation.cross_conversation

    def manipulate(
        self,
        conversations: Iterable[Conversation],
        mode: ManipulationMode = ManipulationMode.SEMANTIC,
        seed: int = 0,
        on_progress: ProgressCallback | None = None,
    ) -> Iterator[Conversation]:
        """
        Replaces every conversation by a manipulated (incoherent) version, in input order.

        Input is streamed unless the mode needs the whole corpus (baseline splicing donors,
        or cross-conversation irrelevancy donors).

        Args:
            conversations (Iterable[Conversation]): coherent conversations
            mode (ManipulationMode): semantic AMR manipulations or text-level baselines
            seed (int): global seed; each conversation derives its own from it
            on_progress (ProgressCallback | None): called once per conversation, in this
                process

        Yields:
            (Conversation): the negative, or the input unchanged (with a warning) when no
                manipulation applies

        """
        corpus: Sequence[Conversation] = ()
        total = None
        if self._needs_corpus(mode):
            corpus = list(conversations)
            conversations, total = corpus, len(corpus)
        task = self._task(mode, seed, corpus, fallback=False)
        logger.info(
            f"Manipulating conversations ({mode!s} mode, seed {seed}, "
            f"{self.jobs} worker process{'es' if self.jobs > 1 else ''})"
        )
        done = unchanged = 0
        for original, negative in self._map_negatives(task, conversations):
            done += 1
            if negative is None:
                unchanged += 1
                if mode == ManipulationMode.BASELINE:
                    logger.warning(
                        f"No baseline primitive applies to conversation {original.id!r}; "
                        f"left unchanged"
                    )
                yield original
            else:
                yield negative
            if on_progress is not None:
                on_progress(
                    ProgressEvent(
                        stage="manipulate", completed=done, total=total, detail=original.id
                    )
                )
        logger.info(f"Manipulated {done - unchanged} of {done} conversation(s)")

    def generate_dataset(
        self,
        conversations: Iterable[Conversation],
        seed: int = 0,
        on_progress: ProgressCallback | None = None,
    ) -> Iterator[Conversation]:
        """
        Builds a balanced training corpus: every positive is followed by its negative (id
        suffixed with `NEGATIVE_SUFFIX`). A positive the semantic pipeline cannot manipulate
        gets a baseline negative instead; if that also fails it is left out.

        Yields:
            (Conversation): alternating coherent and incoherent conversations

        """
        positives = []
        for c in conversations:
            if c.label == Label.INCOHERENT:
                logger.warning(f"Skipping conversation {c.id!r}: already labeled incoherent")
                continue
            positives.append(c.model_copy(update={"label": Label.COHERENT}))
        task = self._task(ManipulationMode.SEMANTIC, seed, positives, fallback=True)
        logger.info(f"Generating a dataset from {len(positives)} positive(s), seed {seed}")
        done = excluded = 0
        for positive, negative in self._map_negatives(task, positives):
            done += 1
            if negative is None:
                excluded += 1
                logger.warning(
                    f"Excluding conversation {positive.id!r}: no manipulation or baseline "
                    f"primitive applies"
                )
            else:
                yield positive
                yield negative.model_copy(update={"id": positive.id + NEGATIVE_SUFFIX})
            if on_progress is not None:
                on_progress(
                    ProgressEvent(
                        stage="manipulate",
                        completed=done,
                        total=len(positives),
                        detail=positive.id,
                    )
                )
        logger.info(f"Dataset holds {2 * (done - excluded)} conversation(s), {excluded} excluded")

    def train_proxy(
        self,
        conversations: Sequence[Conversation],
        on_progress: ProgressCallback | None = None,
    ) -> LinearModel:
        """
        Raises:
            SingleClassError: only one label is present
        """
        check_balance("training data", conversations)
        return train(conversations, self.config.proxy, on_progress)

    def score(
        self,
        model: LinearModel,
        conversations: Iterable[Conversation],
        on_progress: ProgressCallback | None = None,
    ) -> dict[str, float]:
        """Coherence score of every conversation, keyed by id in input order."""
        scores: dict[str, float] = {}
        for done, conversation in enumerate(conversations, start=1):
            scores[conversation.id] = score(model, conversation)
            if on_progress is not None:
                on_progress(
                    ProgressEvent(
                        stage="score", completed=done, total=None, detail=conversation.id
                    )
                )
        logger.info(f"Scored {len(scores)} conversation(s)")
        return scores

    def cross_matrix(
        self,
        train_sets: Mapping[str, Sequence[Conversation]],
        test_sets: Mapping[str, Sequence[Conversation]],
        on_progress: ProgressCallback | None = None,
    ) -> pl.DataFrame:
        """See `incoherify.evaluation.matrix.cross_manipulation_matrix`."""
        logger.info(
            f"Computing a {len(train_sets)}x{len(test_sets)} cross-manipulation matrix"
        )
        return cross_manipulation_matrix(train_sets, test_sets, self.config.proxy, on_progress)
