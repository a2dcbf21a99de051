"""Multi-threaded sorting whose output is byte-identical to the sequential sort.

The input is cut into contiguous chunks at data-independent boundaries, the
chunks are sorted concurrently, and the sorted runs are merged pairwise up a
fixed binary tree, always pairing run 2k (left) with run 2k+1 (right).
Because chunks are contiguous and in input order, left-priority merging up
the tree reproduces the stable sequential result exactly; scheduling can
only change timing, never bytes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import _merge_slots, sort_keys_inplace
from .errors import UsageError
from .order import FloatArray, decode_key_array


@dataclass(frozen=True)
class MergePlan:
    """Fixed execution shape for one (n, threads) pair.

    chunk_boundaries partitions [0, n) in input order; tree_levels lists the
    (left, right) run pairings of every merge level, bottom level first.
    Both depend only on n and the thread count.
    """

    chunk_count: int
    chunk_boundaries: list[tuple[int, int]]
    tree_levels: list[list[tuple[int, int]]]


def plan_merge(n: int, threads: int) -> MergePlan:
    """Plan chunking and merge pairings; a pure function of (n, threads).

    The chunk count is the smallest power of two at or above
    min(threads, max(1, n)); sizes differ by at most one, with earlier
    chunks taking the remainder.
    """
    if n < 0:
        raise UsageError("sequence length cannot be negative")
    if threads < 1:
        raise UsageError("thread count must be at least 1")
    wanted = min(threads, max(1, n))
    chunk_count = 1
    while chunk_count < wanted:
        chunk_count *= 2
    size, remainder = divmod(n, chunk_count)
    boundaries = []
    start = 0
    for i in range(chunk_count):
        end = start + size + (1 if i < remainder else 0)
        boundaries.append((start, end))
        start = end
    levels = []
    runs = chunk_count
    while runs > 1:
        levels.append([(2 * k, 2 * k + 1) for k in range(runs // 2)])
        runs //= 2
    return MergePlan(chunk_count, boundaries, levels)


def _merge_pair(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    ls, rs = _merge_slots(left, right)
    out = np.empty(left.size + right.size, dtype=left.dtype)
    out[ls] = left
    out[rs] = right
    return out


def parallel_sort(s: FloatArray, threads: int) -> FloatArray:
    """Sort with up to ``threads`` workers; bytes never depend on ``threads``.

    Each tree level is a barrier: merges within a level may run concurrently
    because they touch disjoint runs, and results are collected by run index,
    not completion order.  The single top-level merge is inherently serial.
    """
    plan = plan_merge(len(s), threads)
    keys = s.keys()  # fresh buffer; chunk views are disjoint, safe to sort in place
    if plan.chunk_count == 1:
        return FloatArray(decode_key_array(sort_keys_inplace(keys), s.width), s.width)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(sort_keys_inplace, keys[a:b]) for a, b in plan.chunk_boundaries
        ]
        runs = [f.result() for f in futures]
        for level in plan.tree_levels:
            merged = [
                pool.submit(_merge_pair, runs[i], runs[j]) for i, j in level
            ]
            runs = [f.result() for f in merged]
    return FloatArray(decode_key_array(runs[0], s.width), s.width)
