"""Deterministic per-task seed derivation.

Seeds for (dataset, classifier, fold) tasks are derived from a stable
non-cryptographic hash of the task key text mixed with the master seed, so
serial and parallel executions see identical random streams regardless of
scheduling order.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_GOLDEN = 0x9E3779B97F4A7C15


def _fnv1a64(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK
    return h


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return (x ^ (x >> 31)) & _MASK


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 64-bit seed from a master seed and a tuple of key parts."""
    text = "|".join(str(p) for p in parts)
    return _splitmix64((_fnv1a64(text) ^ (master_seed * _GOLDEN)) & _MASK)
