"""Disorder and entropy metrics for float sequences.

The primary metric is the inversion count: the number of pairs i < j whose
elements compare Greater under the total order.  Curved variants reweight
each inverted pair by index distance f(j - i) or by value gap, and the tie
entropy quantifies how much output freedom an unstable sort would leave
among bit-identical elements.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .counting import count_key_inversions
from .errors import ComputationError, UsageError
from .order import FloatArray

_LN2 = math.log(2.0)


class CurveKind(enum.Enum):
    UNIT = "unit"
    INDEX_POWER = "index_power"
    INDEX_LOG = "index_log"
    VALUE_POWER = "value_power"


@dataclass(frozen=True)
class CurveSpec:
    """Weighting rule applied to each inverted pair.

    UNIT counts 1 per pair and reproduces the inversion count exactly.
    INDEX_POWER uses (j - i) ** p, INDEX_LOG uses log(1 + (j - i)) with the
    natural logarithm, VALUE_POWER uses |x_i - x_j| ** p.
    """

    kind: CurveKind
    exponent: float | None = None

    def __post_init__(self) -> None:
        needs_p = self.kind in (CurveKind.INDEX_POWER, CurveKind.VALUE_POWER)
        if needs_p and self.exponent is None:
            raise UsageError(f"{self.kind.value} curve needs an exponent")
        if not needs_p and self.exponent is not None:
            raise UsageError(f"{self.kind.value} curve takes no exponent")

    @property
    def label(self) -> str:
        """Fixed name used in reports and on the command line."""
        if self.kind is CurveKind.UNIT:
            return "unit"
        if self.kind is CurveKind.INDEX_LOG:
            return "log1p"
        if self.kind is CurveKind.INDEX_POWER:
            return "d2" if self.exponent == 2 else f"d{self.exponent:g}"
        return "value2" if self.exponent == 2 else f"value{self.exponent:g}"


UNIT = CurveSpec(CurveKind.UNIT)
INDEX_SQUARED = CurveSpec(CurveKind.INDEX_POWER, 2.0)
INDEX_LOG = CurveSpec(CurveKind.INDEX_LOG)
VALUE_SQUARED = CurveSpec(CurveKind.VALUE_POWER, 2.0)

CURVES_BY_LABEL = {
    c.label: c for c in (UNIT, INDEX_SQUARED, INDEX_LOG, VALUE_SQUARED)
}


def inversion_count(s: FloatArray) -> int:
    """Number of pairs i < j with s[i] Greater than s[j]; 0 iff sorted."""
    return count_key_inversions(s.keys())


def _nan_mask(s: FloatArray) -> np.ndarray:
    w = s.width
    exp = w.bits_dtype.type(w.exponent_mask)
    mant = w.bits_dtype.type(w.mantissa_mask)
    return ((s.bits & exp) == exp) & ((s.bits & mant) != 0)


def curved_disorder(s: FloatArray, curve: CurveSpec) -> float:
    """Sum of curve weights over all inverted pairs.

    For VALUE_POWER, a pair with a NaN on either side has no numeric gap;
    its gap is defined as the unsigned distance between the two order keys
    scaled by the machine epsilon of the width, which is deterministic and
    monotone in key distance.

    Non-finite weights (for example a value gap involving infinities) raise
    ComputationError rather than saturating silently.
    """
    if curve.kind is CurveKind.UNIT:
        return float(inversion_count(s))

    keys = s.keys()
    n = keys.size
    total = 0.0
    if curve.kind is CurveKind.VALUE_POWER:
        values = s.to_floats().astype(np.float64)
        nan = _nan_mask(s)
        eps = s.width.eps
    for i in range(n - 1):
        ki = keys[i]
        inverted = ki > keys[i + 1 :]
        if not inverted.any():
            continue
        if curve.kind is CurveKind.INDEX_POWER:
            d = np.arange(1, n - i, dtype=np.float64)[inverted]
            weights = d ** curve.exponent
        elif curve.kind is CurveKind.INDEX_LOG:
            d = np.arange(1, n - i, dtype=np.float64)[inverted]
            weights = np.log1p(d)
        else:
            tail = keys[i + 1 :][inverted]
            key_gap = (ki - tail).astype(np.float64)  # inverted pairs: ki > tail
            with np.errstate(invalid="ignore"):
                value_gap = np.abs(values[i] - values[i + 1 :][inverted])
            either_nan = nan[i] | nan[i + 1 :][inverted]
            gap = np.where(either_nan, key_gap * eps, value_gap)
            weights = gap ** curve.exponent
        block = float(weights.sum())
        if not math.isfinite(block):
            raise ComputationError(
                f"curve {curve.label} produced a non-finite weight at index {i}"
            )
        total += block
    if not math.isfinite(total):
        raise ComputationError(f"curve {curve.label} sum overflowed")
    return total


def residual_tie_entropy(s: FloatArray) -> float:
    """Sum of log2(k!) over groups of bit-identical elements, in bits.

    This is the output entropy an unstable sort would leave unresolved.
    Grouping is bit identity, so -0/+0 and distinct-payload NaNs form
    separate groups.
    """
    if len(s) == 0:
        return 0.0
    _, counts = np.unique(s.bits, return_counts=True)
    return float(gammaln(counts + 1.0).sum() / _LN2)


def permutation_entropy_baseline(n: int) -> float:
    """log2(n!): the disorder budget of a length-n sequence, in bits."""
    if n < 0:
        raise UsageError("sequence length cannot be negative")
    return math.lgamma(n + 1) / _LN2


@dataclass(frozen=True)
class DisorderReport:
    """Bundle of all metrics for one sequence."""

    n: int
    inversions: int
    curved: dict[CurveSpec, float] = field(default_factory=dict)
    residual_tie_entropy_bits: float = 0.0
    permutation_entropy_baseline_bits: float = 0.0

    def lines(self) -> list[str]:
        """Flat key=value serialization, one metric per line.

        Keys are fixed; float values carry 12 significant digits.  This is
        the format the CLI prints and golden tests compare against.
        """
        out = [f"n={self.n}", f"inversions={self.inversions}"]
        for curve, value in self.curved.items():
            out.append(f"curve.{curve.label}={value:.12g}")
        out.append(
            f"residual_tie_entropy_bits={self.residual_tie_entropy_bits:.12g}"
        )
        out.append(
            "permutation_entropy_baseline_bits="
            f"{self.permutation_entropy_baseline_bits:.12g}"
        )
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


def compute_report(s: FloatArray, curves: tuple[CurveSpec, ...] = (UNIT,)) -> DisorderReport:
    """Evaluate every requested metric for one sequence."""
    return DisorderReport(
        n=len(s),
        inversions=inversion_count(s),
        curved={c: curved_disorder(s, c) for c in curves},
        residual_tie_entropy_bits=residual_tie_entropy(s),
        permutation_entropy_baseline_bits=permutation_entropy_baseline(len(s)),
    )
