"""Merge-based inversion counting over order keys.

Counts pairs i < j with key[i] > key[j].  The divide step mirrors the sort:
split at floor(n/2), count within each half, then count cross pairs by
ranking each right element against the sorted left half.  Small blocks fall
back to a direct pairwise scan.
"""

from __future__ import annotations

import numpy as np

_BLOCK = 64
_UPPER = np.triu(np.ones((_BLOCK, _BLOCK), dtype=bool), k=1)


def _count_sorted(keys: np.ndarray) -> tuple[int, np.ndarray]:
    n = keys.size
    if n <= _BLOCK:
        pairs = keys[:, None] > keys[None, :]
        count = int(np.count_nonzero(pairs & _UPPER[:n, :n]))
        return count, np.sort(keys, kind="stable")
    mid = n // 2
    cl, left = _count_sorted(keys[:mid])
    cr, right = _count_sorted(keys[mid:])
    # For each right element, the left elements above it are cross inversions.
    cross = int((left.size - np.searchsorted(left, right, side="right")).sum())
    merged = np.empty(n, dtype=keys.dtype)
    ls = np.arange(left.size) + np.searchsorted(right, left, side="left")
    rs = np.arange(right.size) + np.searchsorted(left, right, side="right")
    merged[ls] = left
    merged[rs] = right
    return cl + cr + cross, merged


def count_key_inversions(keys: np.ndarray) -> int:
    """Number of out-of-order pairs in an array of order keys."""
    if keys.size < 2:
        return 0
    count, _ = _count_sorted(keys)
    return count
