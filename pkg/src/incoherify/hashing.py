"""
Platform-independent 64-bit hashing: FNV-1a for strings (feature hashing, conversation-id
seeding) and the SplitMix64 finalizer. Python's built-in `hash` is salted per process and
must never leak into anything that has to be reproducible.
"""

from __future__ import annotations

__all__ = ["MASK64", "fnv1a_64", "splitmix64_mix"]

MASK64 = (1 << 64) - 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a_64(text: str) -> int:
    """
    64-bit FNV-1a over the UTF-8 bytes of `text`.

    Args:
        text (str): value to hash

    Returns:
        (int): unsigned 64-bit hash

    """
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & MASK64
    return h


def splitmix64_mix(z: int) -> int:
    """The SplitMix64 output function applied to an arbitrary 64-bit value."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)
