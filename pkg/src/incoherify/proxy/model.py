"""
Logistic regression over hashed conversation features, trained by plain SGD. Stands in for a
fine-tuned transformer evaluator: the coherence score is the predicted probability of the
`coherent` class.

Models persist as a flat little-endian binary: the 7-byte magic, `dim` as `u8`, the bias and
then `dim` weights as `f8`.
"""

from __future__ import annotations

import logging
import struct
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.special import expit

from incoherify.config import ProxyConfig
from incoherify.dialogue.model import Conversation, Label
from incoherify.errors import ModelFormatError, SingleClassError
from incoherify.manipulate.rng import Rng
from incoherify.progress import ProgressCallback, ProgressEvent
from incoherify.proxy.features import FeatureVector, featurize
from incoherify.typing import FloatVec

__all__ = [
    "MAGIC",
    "LinearModel",
    "TrainingMeta",
    "labels_of",
    "load_model",
    "loss_and_gradient",
    "save_model",
    "score",
    "score_vector",
    "train",
    "train_vectors",
]

logger = logging.getLogger(__name__)

MAGIC = b"DEAMLM1"
_HEADER = struct.Struct("<7sQd")
# scores stay strictly inside (0, 1) even where the sigmoid saturates in float64
_SCORE_BOUNDS = (float(np.nextafter(0.0, 1.0)), float(np.nextafter(1.0, 0.0)))


class TrainingMeta(BaseModel):
    epochs: int
    learning_rate: float
    l2: float
    seed: int
    examples: int

    model_config = ConfigDict(frozen=True)


class LinearModel(BaseModel):
    weights: FloatVec
    bias: float = 0.0
    meta: TrainingMeta | None = None
    """Set by `train`; not persisted."""

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _finite(self) -> LinearModel:
        if not (np.all(np.isfinite(self.weights)) and np.isfinite(self.bias)):
            raise ValueError("model weights must be finite")
        return self

    @classmethod
    def zeros(cls, dim: int) -> LinearModel:
        return cls(weights=np.zeros(dim))

    @property
    def dim(self) -> int:
        return int(self.weights.size)


def labels_of(conversations: Sequence[Conversation]) -> np.ndarray:
    """1.0 for coherent, 0.0 for incoherent. Unlabeled conversations are rejected."""
    labels = []
    for c in conversations:
        if c.label is None:
            raise ValueError(f"conversation {c.id!r} has no label")
        labels.append(1.0 if c.label == Label.COHERENT else 0.0)
    return np.asarray(labels, dtype=np.float64)


def score_vector(model: LinearModel, vector: FeatureVector) -> float:
    return float(np.clip(expit(vector.dot(model.weights) + model.bias), *_SCORE_BOUNDS))


def score(model: LinearModel, conversation: Conversation) -> float:
    """Coherence score in (0, 1): the sigmoid of the affine feature score."""
    return score_vector(model, featurize(conversation, model.dim))


def loss_and_gradient(
    model: LinearModel,
    vectors: Sequence[FeatureVector],
    labels: np.ndarray,
    l2: float = 0.0,
) -> tuple[float, np.ndarray, float]:
    """
    Mean logistic loss plus `l2 / 2 * |w|^2`, with its analytic gradient.

    Returns:
        (tuple[float, np.ndarray, float]): loss, gradient w.r.t. the weights, gradient w.r.t.
            the bias

    """
    w = model.weights
    z = np.array([v.dot(w) for v in vectors]) + model.bias
    n = len(vectors)
    loss = float(np.mean(np.logaddexp(0.0, z) - labels * z) + 0.5 * l2 * (w @ w))
    residual = expit(z) - labels
    grad_w = l2 * w.copy()
    for r, v in zip(residual, vectors, strict=True):
        np.add.at(grad_w, v.indices, r * v.values / n)
    grad_b = float(residual.mean())
    return loss, grad_w, grad_b


def train_vectors(
    vectors: Sequence[FeatureVector],
    labels: np.ndarray,
    config: ProxyConfig | None = None,
    on_progress: ProgressCallback | None = None,
) -> LinearModel:
    """
    SGD on the logistic loss, one pass over a seeded permutation of the examples per epoch.

    Raises:
        SingleClassError: `labels` holds only one class

    """
    config = config or ProxyConfig()
    if len(vectors) != len(labels):
        raise ValueError(f"{len(vectors)} vectors but {len(labels)} labels")
    if len(np.unique(labels)) < 2:
        raise SingleClassError("training data must contain both coherent and incoherent examples")

    w = np.zeros(config.dim)
    b = 0.0
    lr, l2 = config.learning_rate, config.l2
    rng = Rng(config.seed)
    for epoch in range(config.epochs):
        for i in rng.permutation(len(vectors)):
            v = vectors[i]
            g = float(expit(v.dot(w) + b)) - labels[i]
            w[v.indices] -= lr * (g * v.values + l2 * w[v.indices])
            b -= lr * g
        if on_progress is not None:
            on_progress(
                ProgressEvent(
                    stage="train",
                    completed=epoch + 1,
                    total=config.epochs,
                    detail=f"epoch {epoch + 1}",
                )
            )
    meta = TrainingMeta(
        epochs=config.epochs,
        learning_rate=lr,
        l2=l2,
        seed=config.seed,
        examples=len(vectors),
    )
    return LinearModel(weights=w, bias=b, meta=meta)


def train(
    examples: Sequence[Conversation],
    config: ProxyConfig | None = None,
    on_progress: ProgressCallback | None = None,
) -> LinearModel:
    """
    Trains the proxy classifier on labeled conversations; deterministic for a fixed
    `config.seed` and example order.

    Raises:
        SingleClassError: only one label is present

    """
    config = config or ProxyConfig()
    labels = labels_of(examples)
    vectors = [featurize(c, config.dim) for c in examples]
    logger.info(
        f"Training on {len(examples)} conversation(s) "
        f"({int(labels.sum())} coherent) for {config.epochs} epoch(s)"
    )
    return train_vectors(vectors, labels, config, on_progress)


def save_model(model: LinearModel, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as f:
        f.write(_HEADER.pack(MAGIC, model.dim, model.bias))
        f.write(model.weights.astype("<f8").tobytes())
    logger.info(f"Saved {model.dim}-dimensional model to '{path}'")


def load_model(path: Path) -> LinearModel:
    """
    Raises:
        ModelFormatError: wrong magic or truncated payload
    """
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ModelFormatError(f"'{path}' is too short to be a model file")
    magic, dim, bias = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ModelFormatError(f"'{path}' does not start with {MAGIC!r}")
    payload = data[_HEADER.size :]
    if len(payload) != 8 * dim:
        raise ModelFormatError(
            f"'{path}' holds {len(payload)} weight bytes, expected {8 * dim}"
        )
    weights = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return LinearModel(weights=weights, bias=bias)
