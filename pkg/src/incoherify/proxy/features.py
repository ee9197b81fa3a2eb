"""
Hashed bag-of-features view of a conversation for the proxy classifier. Feature strings are
namespaced (`c:` concept, `cb:` concept bigram, `rb:` role bigram, `d:` depth bucket, `snt:`
sentence count, `t:`/`tb:` surface tokens) and hashed with 64-bit FNV-1a truncated to
`log2(dim)` bits.

Concept and role sequences run across utterance boundaries (a `<u>` marker separates turns),
so reordering utterances changes the vector.
"""

from __future__ import annotations

from collections.abc import Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from incoherify.amr import AmrGraph, depth, traverse
from incoherify.dialogue.model import Conversation, sentence_units
from incoherify.hashing import fnv1a_64
from incoherify.typing import FloatVec, IndexVec

__all__ = ["DEFAULT_DIM", "FeatureVector", "feature_strings", "featurize", "hash_feature"]

DEFAULT_DIM = 1 << 18

_BOUNDARY = "<u>"
_MAX_DEPTH_BUCKET = 6
_MAX_SNT_BUCKET = 5


class FeatureVector(BaseModel):
    """Sparse count vector: sorted unique bucket `indices` with their `values` (counts)."""

    dim: int
    indices: IndexVec
    values: FloatVec

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check(self) -> FeatureVector:
        if self.indices.shape != self.values.shape:
            raise ValueError("indices and values must have the same length")
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= self.dim):
            raise ValueError(f"bucket index outside [0, {self.dim})")
        if self.values.size and self.values.min() < 1:
            raise ValueError("feature counts must be at least 1")
        return self

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def dot(self, weights: np.ndarray) -> float:
        return float(weights[self.indices] @ self.values)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim)
        dense[self.indices] = self.values
        return dense

    def same_as(self, other: FeatureVector) -> bool:
        return (
            self.dim == other.dim
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )


def hash_feature(feature: str, dim: int) -> int:
    return fnv1a_64(feature) & (dim - 1)


def _amr_features(amr: AmrGraph) -> tuple[list[str], list[str]]:
    concepts: list[str] = []
    roles: list[str] = []
    for var, via in traverse(amr):
        concepts.append(amr.nodes[var])
        if via is not None:
            roles.append(via.role)
        roles.extend(a.role for a in amr.attributes_of(var))
    return concepts, roles


def _bigrams(tokens: list[str], prefix: str) -> Iterator[str]:
    for a, b in zip(tokens, tokens[1:]):
        yield f"{prefix}:{a}|{b}"


def feature_strings(conversation: Conversation) -> Iterator[str]:
    """Every (unhashed) feature occurrence of `conversation`, in a fixed order."""
    concept_seq: list[str] = []
    role_seq: list[str] = []
    for i, u in enumerate(conversation.utterances):
        if i:
            concept_seq.append(_BOUNDARY)
            role_seq.append(_BOUNDARY)
        concepts, roles = _amr_features(u.amr)
        concept_seq.extend(concepts)
        role_seq.extend(roles)
        yield from (f"c:{c}" for c in concepts)
        yield f"d:{min(depth(u.amr), _MAX_DEPTH_BUCKET)}"
        yield f"snt:{min(len(sentence_units(u)), _MAX_SNT_BUCKET)}"
        if u.text:
            tokens = u.text.lower().split()
            yield from (f"t:{t}" for t in tokens)
            yield from _bigrams(tokens, "tb")
    yield from _bigrams(concept_seq, "cb")
    yield from _bigrams(role_seq, "rb")


def featurize(conversation: Conversation, dim: int = DEFAULT_DIM) -> FeatureVector:
    """
    Hashes the features of `conversation` into a `dim`-bucket count vector.

    Args:
        conversation (Conversation): a valid conversation
        dim (int): number of buckets, a power of two

    Returns:
        (FeatureVector): deterministic across runs and platforms

    """
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"dim must be a power of two, got {dim}")
    buckets = np.fromiter(
        (hash_feature(f, dim) for f in feature_strings(conversation)), dtype=np.int64
    )
    indices, counts = np.unique(buckets, return_counts=True)
    return FeatureVector(
        dim=dim, indices=indices.astype(np.int64), values=counts.astype(np.float64)
    )
