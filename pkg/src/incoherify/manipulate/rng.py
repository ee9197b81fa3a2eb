"""
Portable seeded randomness. `Rng` is a SplitMix64 stream with rejection-sampled integer draws,
so a seed yields the same sequence on every platform and Python version (unlike `random`,
whose algorithms may change between releases).
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import TypeVar

from incoherify.hashing import MASK64, fnv1a_64, splitmix64_mix

__all__ = ["Rng", "conversation_seed"]

T = TypeVar("T")

_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def conversation_seed(seed: int, conversation_id: str) -> int:
    """Per-conversation seed: `SplitMix64(seed XOR FNV-1a(conversation_id))`."""
    return splitmix64_mix((seed & MASK64) ^ fnv1a_64(conversation_id))


class Rng:
    """SplitMix64 generator."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    @classmethod
    def for_conversation(cls, seed: int, conversation_id: str) -> Rng:
        return cls(conversation_seed(seed, conversation_id))

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN_GAMMA) & MASK64
        return splitmix64_mix(self.state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n). Rejection sampling removes modulo bias."""
        if n <= 0:
            raise ValueError(f"randbelow needs a positive bound, got {n}")
        limit = ((1 << 64) // n) * n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends included."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.randbelow(hi - lo + 1)

    def choice(self, items: Sequence[T]) -> T:
        if not items:
            raise IndexError("cannot choose from an empty sequence")
        return items[self.randbelow(len(items))]

    def weighted_choice(self, items: Sequence[T], weights: Sequence[float]) -> T:
        total = float(sum(weights))
        if not items or len(items) != len(weights) or total <= 0:
            raise ValueError("weighted choice needs matching items and positive total weight")
        x = self.random() * total
        acc = 0.0
        for item, w in zip(items, weights, strict=True):
            acc += w
            if x < acc:
                return item
        return next(item for item, w in zip(reversed(items), reversed(weights)) if w > 0)

    def permutation(self, n: int) -> list[int]:
        """Uniform permutation of `range(n)` (Fisher-Yates)."""
        order = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.randbelow(i + 1)
            order[i], order[j] = order[j], order[i]
        return order

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        """`k` distinct positions of `items`, in draw order."""
        if not 0 <= k <= len(items):
            raise ValueError(f"cannot sample {k} of {len(items)} items")
        pool = list(items)
        for i in range(k):
            j = i + self.randbelow(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
