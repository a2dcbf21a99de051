"""Disorder metrics against closed forms and pair-scan oracles."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reprosort.errors import ComputationError, UsageError
from reprosort.metrics import (
    CURVES_BY_LABEL,
    CurveKind,
    CurveSpec,
    INDEX_LOG,
    INDEX_SQUARED,
    UNIT,
    VALUE_SQUARED,
    compute_report,
    curved_disorder,
    inversion_count,
    permutation_entropy_baseline,
    residual_tie_entropy,
)
from reprosort.core import sort
from reprosort.order import FloatArray, Width, nan_value

from oracles import brute_curved_index, brute_inversions, brute_tie_entropy


def farr(values) -> FloatArray:
    return FloatArray.from_floats(values)


def random_with_ties(rng, n: int) -> FloatArray:
    pool = rng.integers(0, max(n // 3, 1), size=n).astype(np.float64)
    return farr(pool)


class TestInversionCount:
    def test_sorted_is_zero(self):
        assert inversion_count(farr([1.0, 2.0, 2.0, 3.0])) == 0
        assert inversion_count(farr([])) == 0

    def test_reversed_distinct_is_n_choose_2(self):
        n = 100
        s = farr(list(range(n, 0, -1)))
        assert inversion_count(s) == n * (n - 1) // 2

    def test_matches_pair_scan_on_random_permutations(self, rng):
        base = np.arange(50, dtype=np.float64)
        for _ in range(200):
            s = farr(rng.permutation(base))
            assert inversion_count(s) == brute_inversions(s)

    def test_matches_pair_scan_with_heavy_ties(self, rng):
        for n in [1, 2, 3, 17, 256, 1000]:
            s = random_with_ties(rng, n)
            assert inversion_count(s) == brute_inversions(s)

    def test_zero_iff_sorted_after_sorting(self, rng):
        s = random_with_ties(rng, 300)
        assert inversion_count(sort(s)) == 0

    @given(st.lists(st.floats(allow_nan=False), max_size=60))
    def test_adjacent_swap_of_inverted_pair_removes_exactly_one(self, values):
        s = farr(values)
        keys = s.keys()
        for i in range(len(values) - 1):
            if keys[i] > keys[i + 1]:
                swapped = list(s.bits)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                t = FloatArray(np.asarray(swapped, dtype=np.uint64), s.width)
                assert inversion_count(t) == inversion_count(s) - 1
                break


class TestCurvedDisorder:
    def test_sorted_is_zero_for_every_curve(self):
        s = farr([1.0, 2.0, 3.0])
        for curve in (UNIT, INDEX_SQUARED, INDEX_LOG, VALUE_SQUARED):
            assert curved_disorder(s, curve) == 0.0

    def test_unit_equals_inversion_count(self, rng):
        for n in [0, 1, 10, 333]:
            s = random_with_ties(rng, n)
            assert curved_disorder(s, UNIT) == float(inversion_count(s))

    def test_hand_example_index_squared(self):
        # inverted pairs: (0,1) at distance 1 and (0,2) at distance 2
        assert curved_disorder(farr([3.0, 1.0, 2.0]), INDEX_SQUARED) == 5.0

    def test_index_curves_match_pair_scan(self, rng):
        s = random_with_ties(rng, 120)
        got = curved_disorder(s, INDEX_SQUARED)
        assert got == pytest.approx(brute_curved_index(s, lambda d: d * d), rel=1e-12)
        got = curved_disorder(s, INDEX_LOG)
        assert got == pytest.approx(
            brute_curved_index(s, lambda d: math.log1p(d)), rel=1e-12
        )

    def test_value_curve_plain_values(self):
        # only inverted pair is (3.0, 1.0): gap 2, squared 4
        assert curved_disorder(farr([3.0, 1.0, 4.0]), VALUE_SQUARED) == 4.0

    def test_value_curve_nan_pairs_use_key_distance(self):
        lo = nan_value(payload=1)
        hi = nan_value(payload=3)
        s = FloatArray.from_values([hi, lo])  # inverted: payload 3 before 1
        expected = (2.0 * Width.BINARY64.eps) ** 2
        assert curved_disorder(s, VALUE_SQUARED) == pytest.approx(expected, rel=1e-12)

    def test_value_curve_infinite_gap_is_an_error(self):
        s = farr([float("inf"), 1.0])
        with pytest.raises(ComputationError):
            curved_disorder(s, VALUE_SQUARED)

    def test_curve_spec_validation(self):
        with pytest.raises(UsageError):
            CurveSpec(CurveKind.INDEX_POWER)
        with pytest.raises(UsageError):
            CurveSpec(CurveKind.UNIT, exponent=2.0)

    def test_labels(self):
        assert UNIT.label == "unit"
        assert INDEX_SQUARED.label == "d2"
        assert INDEX_LOG.label == "log1p"
        assert VALUE_SQUARED.label == "value2"
        assert set(CURVES_BY_LABEL) == {"unit", "d2", "log1p", "value2"}


class TestTieEntropy:
    def test_all_distinct_is_zero(self):
        assert residual_tie_entropy(farr([1.0, 2.0, 3.0])) == 0.0

    def test_single_group_closed_form(self):
        s = farr([7.0] * 4)
        assert residual_tie_entropy(s) == pytest.approx(math.log2(24), rel=1e-12)

    def test_mixed_groups_closed_form(self):
        s = farr([1.0, 2.0, 1.0, 3.0, 1.0, 2.0])  # groups of 3, 2, 1
        expected = math.log2(6) + 1.0
        assert residual_tie_entropy(s) == pytest.approx(expected, rel=1e-12)

    def test_signed_zeros_are_separate_groups(self):
        s = farr([0.0, -0.0, 0.0, -0.0])
        assert residual_tie_entropy(s) == pytest.approx(2.0, rel=1e-12)  # two pairs

    def test_matches_brute_force(self, rng):
        s = random_with_ties(rng, 400)
        assert residual_tie_entropy(s) == pytest.approx(
            brute_tie_entropy(s), rel=1e-9
        )

    def test_permutation_invariant(self, rng):
        s = random_with_ties(rng, 300)
        assert residual_tie_entropy(sort(s)) == pytest.approx(
            residual_tie_entropy(s), rel=1e-12
        )


class TestPermutationBaseline:
    def test_degenerate(self):
        assert permutation_entropy_baseline(0) == 0.0
        assert permutation_entropy_baseline(1) == 0.0

    def test_small_closed_form(self):
        assert permutation_entropy_baseline(4) == pytest.approx(math.log2(24), rel=1e-12)

    def test_matches_direct_summation(self):
        direct = sum(math.log2(k) for k in range(2, 101))
        assert permutation_entropy_baseline(100) == pytest.approx(direct, rel=1e-9)

    def test_negative_rejected(self):
        with pytest.raises(UsageError):
            permutation_entropy_baseline(-1)


class TestReport:
    def test_render_golden(self):
        s = farr([3.0, 1.0, 2.0, 2.0])
        report = compute_report(s, (UNIT, INDEX_SQUARED))
        assert report.render() == (
            "n=4\n"
            "inversions=3\n"
            "curve.unit=3\n"
            "curve.d2=14\n"
            "residual_tie_entropy_bits=1\n"
            "permutation_entropy_baseline_bits=4.58496250072\n"
        )
