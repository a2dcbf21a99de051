"""Sorting: correctness, stability, idempotence, determinism, trace."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import reprosort.core as core
from reprosort.core import (
    is_sorted,
    merge,
    merge_origins,
    sort,
    sort_indices,
    sort_with_trace,
)
from reprosort.errors import WidthMismatchError
from reprosort.order import FloatArray, FloatValue, Width, nan_value, zero_value
from reprosort.repro import digest_sequence

from oracles import brute_inversions, oracle_sort


def farr(values) -> FloatArray:
    return FloatArray.from_floats(values)


def random_multiset(rng, n: int, tie_share: float = 0.3) -> FloatArray:
    # roughly tie_share of elements drawn from a tiny dictionary
    dictionary = np.asarray([0.0, -0.0, 1.0, 2.5, float("inf")])
    fresh = rng.standard_normal(n)
    pick = rng.random(n) < tie_share
    values = np.where(pick, dictionary[rng.integers(0, 5, size=n)], fresh)
    return farr(values)


special_floats = st.sampled_from(
    [0.0, -0.0, 1.0, -1.0, float("inf"), float("-inf"), 2.5]
)
small_arrays = st.lists(
    st.one_of(st.floats(allow_nan=False, width=64), special_floats), max_size=64
).map(farr)


class TestSort:
    def test_special_value_golden(self):
        s = FloatArray.from_values(
            [
                zero_value(),
                zero_value(negative=True),
                nan_value(payload=1),
                FloatValue.from_float(5.0),
            ]
        )
        out = sort(s)
        assert out == FloatArray.from_values(
            [
                zero_value(negative=True),
                zero_value(),
                FloatValue.from_float(5.0),
                nan_value(payload=1),
            ]
        )

    def test_nan_payloads_ascending(self):
        s = FloatArray.from_values(
            [nan_value(payload=3), nan_value(payload=1), nan_value(payload=2)]
        )
        out = sort(s)
        assert [v.bits & 0xFF for v in out] == [1, 2, 3]

    def test_base_cases(self):
        assert sort(farr([])) == farr([])
        assert sort(farr([2.0])) == farr([2.0])

    def test_matches_decorate_sort_undecorate_oracle(self, rng):
        for _ in range(500):
            s = random_multiset(rng, int(rng.integers(0, 200)))
            assert sort(s) == oracle_sort(s)

    def test_cutoff_boundary_sizes(self, rng):
        for n in [core.BASE_RUN_LENGTH - 1, core.BASE_RUN_LENGTH, core.BASE_RUN_LENGTH + 1]:
            s = random_multiset(rng, n)
            assert sort(s) == oracle_sort(s)

    @given(small_arrays)
    def test_idempotent(self, s):
        once = sort(s)
        assert sort(once) == once

    @given(small_arrays)
    def test_permutation_of_input(self, s):
        out = sort(s)
        assert np.array_equal(np.sort(s.bits), np.sort(out.bits))

    @given(small_arrays)
    def test_output_sorted(self, s):
        assert is_sorted(sort(s))

    def test_determinism_across_runs(self, rng):
        s = random_multiset(rng, 2000)
        assert digest_sequence(sort(s)) == digest_sequence(sort(s))

    def test_shuffle_invariance(self, rng):
        s = random_multiset(rng, 1500)
        shuffled = FloatArray(rng.permutation(s.bits), s.width)
        assert digest_sequence(sort(shuffled)) == digest_sequence(sort(s))

    def test_all_nan_idempotence(self):
        s = FloatArray.from_values([nan_value(payload=p % 5 + 1) for p in range(50)])
        once = sort(s)
        assert sort(once) == once


class TestStability:
    def test_sort_indices_is_the_decorated_permutation(self, rng):
        for _ in range(50):
            s = random_multiset(rng, int(rng.integers(0, 120)))
            decorated = sorted((int(k), i) for i, k in enumerate(s.keys()))
            assert [i for _, i in decorated] == list(sort_indices(s))

    def test_tie_groups_keep_input_order(self, rng):
        s = random_multiset(rng, 800, tie_share=0.6)
        perm = sort_indices(s)
        sorted_keys = s.keys()[perm]
        same_as_prev = sorted_keys[1:] == sorted_keys[:-1]
        assert np.all(~same_as_prev | (perm[1:] > perm[:-1]))


class TestMerge:
    def test_identity_with_empty(self):
        s = farr([1.0, 2.0])
        assert merge(s, farr([])) == s
        assert merge(farr([]), s) == s

    def test_hand_merge_with_tie(self):
        out = merge(farr([1.0, 3.0, 5.0]), farr([2.0, 3.0, 4.0]))
        assert out == farr([1.0, 2.0, 3.0, 3.0, 4.0, 5.0])

    def test_left_instance_emitted_first_on_tie(self):
        origins = merge_origins(farr([1.0]), farr([1.0]))
        assert list(origins) == [0, 1]

    def test_origin_pattern_hand_case(self):
        origins = merge_origins(farr([1.0, 3.0, 5.0]), farr([2.0, 3.0, 4.0]))
        assert list(origins) == [0, 1, 0, 1, 1, 0]

    def test_width_mismatch_rejected(self):
        with pytest.raises(WidthMismatchError):
            merge(farr([1.0]), FloatArray.from_floats([1.0], Width.BINARY32))

    @given(small_arrays, small_arrays)
    def test_merge_of_sorted_inputs_is_sorted(self, a, b):
        out = merge(sort(a), sort(b))
        assert is_sorted(out)
        assert len(out) == len(a) + len(b)

    @given(small_arrays, small_arrays)
    def test_merge_matches_two_pointer_reference(self, a, b):
        left, right = sort(a), sort(b)
        lk, rk = left.keys(), right.keys()
        # independent reference: the textbook loop with left-priority ties
        out, i, j = [], 0, 0
        while i < lk.size and j < rk.size:
            if rk[j] < lk[i]:
                out.append(int(right.bits[j])); j += 1
            else:
                out.append(int(left.bits[i])); i += 1
        out.extend(int(x) for x in left.bits[i:])
        out.extend(int(x) for x in right.bits[j:])
        assert [int(x) for x in merge(left, right).bits] == out


class TestTrace:
    def test_already_sorted_flat_zero(self):
        _, trace = sort_with_trace(farr([1.0, 2.0, 3.0, 4.0]))
        assert all(value == 0.0 for value in trace.potentials)

    def test_reversed_four(self):
        out, trace = sort_with_trace(farr([4.0, 3.0, 2.0, 1.0]))
        assert trace.passes == [(0, -6.0), (1, -4.0), (2, 0.0)]
        assert out == farr([1.0, 2.0, 3.0, 4.0])

    def test_monotone_and_terminates_at_zero(self, rng):
        s = random_multiset(rng, 256)
        out, trace = sort_with_trace(s)
        values = trace.potentials
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert values[-1] == 0.0
        assert values[0] == -float(brute_inversions(s))
        assert out == sort(s)

    def test_agrees_with_top_down_sort(self, rng):
        for n in [0, 1, 2, 3, 10, 63, 64, 65, 500]:
            s = random_multiset(rng, n)
            out, _ = sort_with_trace(s)
            assert out == sort(s)


class TestDebugChecks:
    def test_unsorted_merge_input_caught_when_enabled(self, monkeypatch):
        monkeypatch.setattr(core, "_DEBUG_CHECKS", True)
        with pytest.raises(Exception):
            merge(farr([2.0, 1.0]), farr([3.0]))
