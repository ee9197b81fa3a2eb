"""
Cross-manipulation matrix: train the proxy classifier on a dataset built with one kind of
negative, measure its accuracy on datasets built with another.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path

import polars as pl

from incoherify.config import ProxyConfig
from incoherify.dialogue.model import Conversation, Label
from incoherify.errors import SingleClassError
from incoherify.evaluation.scores import accuracy
from incoherify.progress import ProgressCallback, ProgressEvent
from incoherify.proxy import featurize, score_vector, train

__all__ = ["check_balance", "cross_manipulation_matrix", "read_matrix", "write_matrix"]

logger = logging.getLogger(__name__)

ROW_HEADER = "train"


def check_balance(name: str, dataset: Sequence[Conversation]) -> tuple[int, int]:
    """
    Counts coherent and incoherent conversations, warning when they differ.

    Raises:
        SingleClassError: the dataset holds only one label
        ValueError: a conversation is unlabeled

    """
    coherent = incoherent = 0
    for c in dataset:
        if c.label is None:
            raise ValueError(f"dataset {name!r}: conversation {c.id!r} has no label")
        if c.label == Label.COHERENT:
            coherent += 1
        else:
            incoherent += 1
    if not coherent or not incoherent:
        raise SingleClassError(
            f"dataset {name!r} holds {coherent} coherent and {incoherent} incoherent conversations"
        )
    if coherent != incoherent:
        logger.warning(
            f"Dataset {name!r} is not balanced: {coherent} coherent, {incoherent} incoherent"
        )
    return coherent, incoherent


def cross_manipulation_matrix(
    train_sets: Mapping[str, Sequence[Conversation]],
    test_sets: Mapping[str, Sequence[Conversation]],
    config: ProxyConfig | None = None,
    on_progress: ProgressCallback | None = None,
) -> pl.DataFrame:
    """
    Trains one proxy per training set and scores every test set with it.

    Args:
        train_sets (Mapping[str, Sequence[Conversation]]): named labeled training datasets
        test_sets (Mapping[str, Sequence[Conversation]]): named labeled test datasets
        config (ProxyConfig | None): training hyperparameters shared by every cell
        on_progress (ProgressCallback | None): called once per finished cell

    Returns:
        (pl.DataFrame): a `train` column with the training-set names, then one accuracy
            column per test set, both in the given order

    Raises:
        SingleClassError: a dataset holds only one label
        ValueError: no datasets on either side, or a test set named like the row column

    """
    if not train_sets or not test_sets:
        raise ValueError("the matrix needs at least one training and one test dataset")
    if ROW_HEADER in test_sets:
        raise ValueError(f"a test dataset cannot be named {ROW_HEADER!r}: that is the row column")
    config = config or ProxyConfig()
    for name, dataset in {**train_sets, **test_sets}.items():
        check_balance(name, dataset)

    test_vectors = {
        name: [featurize(c, config.dim) for c in dataset] for name, dataset in test_sets.items()
    }
    total = len(train_sets) * len(test_sets)
    done = 0
    columns: dict[str, list[float]] = {name: [] for name in test_sets}
    for train_name, dataset in train_sets.items():
        model = train(dataset, config)
        for test_name, vectors in test_vectors.items():
            scores = [score_vector(model, v) for v in vectors]
            acc = accuracy(scores, [c.label for c in test_sets[test_name]])
            columns[test_name].append(acc)
            done += 1
            logger.info(f"{train_name} -> {test_name}: accuracy {acc:.3f}")
            if on_progress is not None:
                on_progress(
                    ProgressEvent(
                        stage="matrix",
                        completed=done,
                        total=total,
                        detail=f"{train_name} -> {test_name}",
                    )
                )
    return pl.DataFrame(
        {ROW_HEADER: list(train_sets), **columns},
        schema={ROW_HEADER: pl.Utf8, **{name: pl.Float64 for name in test_sets}},
    )


def write_matrix(matrix: pl.DataFrame, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix.write_csv(path, separator="\t", float_precision=6)


def read_matrix(path: Path) -> pl.DataFrame:
    return pl.read_csv(path, separator="\t")
