"""Deterministic stable merge sort over the total order.

The sort is a fixed-shape divide and conquer: split at floor(n/2), sort the
halves, merge with left-before-right tie-breaking.  Nothing about the shape
or the tie rule depends on the data, so identical input bits produce
identical output bits on every run and platform.

Merging is done by rank computation rather than a two-pointer loop: each
left element lands after the right elements strictly below it, each right
element lands after the left elements at or below it.  That is exactly the
stable left-priority merge, and it vectorizes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .counting import count_key_inversions
from .errors import UsageError
from .order import FloatArray, check_same_width, decode_key_array

# Runs at or below this length are sorted directly with a stable base sort
# before merging takes over.  The value only affects speed, never output.
BASE_RUN_LENGTH = 65536

# Opt-in O(n) verification that merge inputs really are sorted.
_DEBUG_CHECKS = bool(os.environ.get("REPROSORT_DEBUG_CHECKS"))


def _merge_slots(left_keys: np.ndarray, right_keys: np.ndarray):
    """Output positions for each side of a stable left-priority merge."""
    left_slots = np.arange(left_keys.size) + np.searchsorted(
        right_keys, left_keys, side="left"
    )
    right_slots = np.arange(right_keys.size) + np.searchsorted(
        left_keys, right_keys, side="right"
    )
    return left_slots, right_slots


def _msort(a: np.ndarray, b: np.ndarray, lo: int, hi: int, into_b: bool) -> None:
    # Ping-pong merge sort: the result of [lo, hi) lands in b when into_b,
    # else in a.  Children deliver into the opposite buffer, so each level
    # merges across and no per-merge allocation happens.
    n = hi - lo
    if n <= BASE_RUN_LENGTH:
        dst = b if into_b else a
        dst[lo:hi] = np.sort(a[lo:hi], kind="stable")
        return
    mid = lo + n // 2
    _msort(a, b, lo, mid, not into_b)
    _msort(a, b, mid, hi, not into_b)
    src = a if into_b else b
    dst = b if into_b else a
    ls, rs = _merge_slots(src[lo:mid], src[mid:hi])
    dst[lo:hi][ls] = src[lo:mid]
    dst[lo:hi][rs] = src[mid:hi]


def sort_keys_inplace(keys: np.ndarray) -> np.ndarray:
    """Sort an owned array of order keys in place and return it."""
    if keys.size > 1:
        aux = np.empty_like(keys)
        _msort(keys, aux, 0, keys.size, into_b=False)
    return keys


def sort_keys(keys: np.ndarray) -> np.ndarray:
    """Sorted copy of an array of order keys."""
    return sort_keys_inplace(keys.copy())


def sort(s: FloatArray) -> FloatArray:
    """Return ``s`` sorted under the total order.

    The output is a permutation of the input, stable (bit-identical elements
    keep their input order), and byte-deterministic.
    """
    keys = sort_keys_inplace(s.keys())  # keys() returns a fresh buffer
    return FloatArray(decode_key_array(keys, s.width), s.width)


def _argsort(keys: np.ndarray, idx: np.ndarray):
    n = keys.size
    if n <= BASE_RUN_LENGTH:
        order = np.argsort(keys, kind="stable")
        return keys[order], idx[order]
    mid = n // 2
    lk, li = _argsort(keys[:mid], idx[:mid])
    rk, ri = _argsort(keys[mid:], idx[mid:])
    ls, rs = _merge_slots(lk, rk)
    mk = np.empty(n, dtype=keys.dtype)
    mi = np.empty(n, dtype=idx.dtype)
    mk[ls] = lk
    mk[rs] = rk
    mi[ls] = li
    mi[rs] = ri
    return mk, mi


def sort_indices(s: FloatArray) -> np.ndarray:
    """The permutation the sort applies: original index of each output slot.

    Equivalent to decorating every element with its index and sorting the
    (key, index) pairs lexicographically; useful for stability checks.
    """
    _, perm = _argsort(s.keys(), np.arange(len(s), dtype=np.int64))
    return perm


def merge(left: FloatArray, right: FloatArray) -> FloatArray:
    """Merge two sequences sorted under the total order.

    On ties the left element is emitted first.  Inputs are assumed sorted;
    set REPROSORT_DEBUG_CHECKS=1 to verify that at O(n) cost.
    """
    check_same_width(left, right)
    if _DEBUG_CHECKS and not (is_sorted(left) and is_sorted(right)):
        raise UsageError("merge inputs must be sorted")
    lk, rk = left.keys(), right.keys()
    ls, rs = _merge_slots(lk, rk)
    out = np.empty(lk.size + rk.size, dtype=left.width.bits_dtype)
    out[ls] = left.bits
    out[rs] = right.bits
    return FloatArray(out, left.width)


def merge_origins(left: FloatArray, right: FloatArray) -> np.ndarray:
    """Which side each merged slot is drawn from: 0 for left, 1 for right.

    Makes the left-before-right tie rule observable even though tied
    elements are bit-identical.
    """
    check_same_width(left, right)
    ls, rs = _merge_slots(left.keys(), right.keys())
    origins = np.empty(len(left) + len(right), dtype=np.uint8)
    origins[ls] = 0
    origins[rs] = 1
    return origins


def is_sorted(s: FloatArray) -> bool:
    """True iff no adjacent pair is out of order under the total order."""
    k = s.keys()
    return bool(np.all(k[:-1] <= k[1:]))


@dataclass(frozen=True)
class SortTrace:
    """Convergence record of the bottom-up sort.

    ``passes`` holds (pass_index, potential) pairs where the potential is
    the negated inversion count of the working sequence after that merge
    pass.  Entry 0 is the unsorted input.  The potential never decreases
    and ends at 0.
    """

    passes: list[tuple[int, float]] = field(default_factory=list)

    @property
    def potentials(self) -> list[float]:
        return [value for _, value in self.passes]


def sort_with_trace(s: FloatArray) -> tuple[FloatArray, SortTrace]:
    """Bottom-up merge sort recording the potential after every pass.

    Pass k merges adjacent runs of length 2**(k-1).  The final sequence is
    bit-identical to :func:`sort`.
    """
    work = s.keys()
    n = work.size
    width = s.width

    def potential(keys: np.ndarray) -> float:
        return float(-count_key_inversions(keys))

    passes = [(0, potential(work))]
    run = 1
    index = 1
    buf = np.empty_like(work)
    while run < n:
        for start in range(0, n, 2 * run):
            mid = min(start + run, n)
            end = min(start + 2 * run, n)
            ls, rs = _merge_slots(work[start:mid], work[mid:end])
            buf[start:end][ls] = work[start:mid]
            buf[start:end][rs] = work[mid:end]
        work, buf = buf, work
        passes.append((index, potential(work)))
        index += 1
        run *= 2
    out = FloatArray(decode_key_array(work, width), width)
    return out, SortTrace(passes)
