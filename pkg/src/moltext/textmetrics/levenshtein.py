"""Levenshtein edit distance over Unicode strings."""

from __future__ import annotations

import numpy as np

from .. import kernels


def _codes(text: str) -> np.ndarray:
    if not text:
        return np.empty(0, dtype=np.uint32)
    return np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32)


def levenshtein(a: str, b: str) -> int:
    """Minimal number of single-character insertions, deletions and
    substitutions turning a into b."""
    if a == b:
        return 0
    return int(kernels.levenshtein_codes(_codes(a), _codes(b)))


def levenshtein_recursive(a: str, b: str) -> int:
    """The textbook exponential recursion, for cross-checking only."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    cost = 0 if a[-1] == b[-1] else 1
    return min(
        levenshtein_recursive(a[:-1], b[:-1]) + cost,
        levenshtein_recursive(a[:-1], b) + 1,
        levenshtein_recursive(a, b[:-1]) + 1,
    )
