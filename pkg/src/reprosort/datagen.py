"""Deterministic corpus generation from a fixed seed.

Randomness comes from SplitMix64 (seed + k * 0x9E3779B97F4A7C15 fed through
the published two-multiply mix), evaluated per index so generation is pure
integer arithmetic plus exactly specified IEEE-754 conversions.  No
platform math library is involved, so identical specs give identical bits
on every machine.

Transforms:
  uniform   u = (x >> 11) * 2**-53, the standard 53-bit double in [0, 1)
  gaussian  sum of 12 uniform numerators minus 6, one rounding step
            (Irwin-Hall approximation of the standard normal)
  ties      a 24-bit draw against a fixed threshold selects one of 16
            dictionary values; otherwise a fresh uniform is used
  specials  appended after the base values: signed-zero pairs, infinity
            pairs, then quiet NaNs with payloads 1, 2, 3, ...
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import UsageError
from .order import FloatArray, Width, inf_value, nan_value, zero_value
from .repro import SequenceDigest, digest_sequence

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1

# Values a duplicate-heavy corpus draws its ties from.  Fixed forever; tests
# and documentation rely on the exact members.
TIE_DICTIONARY = (
    0.0, -0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0,
    10.0, -10.0, 0.25, 100.0, 1000.0, 0.001, 42.0, -42.0,
)

_TIE_DRAW_BITS = 24
_GENERATION_BLOCK = 1 << 20


@dataclass(frozen=True)
class Gaussian:
    pass


@dataclass(frozen=True)
class Uniform:
    pass


@dataclass(frozen=True)
class DuplicateHeavy:
    tie_fraction: float


@dataclass(frozen=True)
class SpecialValues:
    nan_count: int = 3
    signed_zero_pairs: int = 2
    inf_pairs: int = 1


Distribution = Gaussian | Uniform | DuplicateHeavy | SpecialValues


@dataclass(frozen=True)
class CorpusSpec:
    distribution: Distribution
    n: int
    seed: int
    width: Width = Width.BINARY64

    def __post_init__(self) -> None:
        if self.n < 0:
            raise UsageError("corpus size cannot be negative")
        if isinstance(self.distribution, DuplicateHeavy):
            f = self.distribution.tie_fraction
            if not 0.0 <= f <= 1.0:
                raise UsageError(f"tie fraction {f} outside [0, 1]")
        if isinstance(self.distribution, SpecialValues):
            d = self.distribution
            if min(d.nan_count, d.signed_zero_pairs, d.inf_pairs) < 0:
                raise UsageError("special counts cannot be negative")
            if self._special_count() > self.n:
                raise UsageError("more special values than corpus elements")

    def _special_count(self) -> int:
        d = self.distribution
        return d.nan_count + 2 * d.signed_zero_pairs + 2 * d.inf_pairs


def splitmix64(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs start .. start+count-1 of the SplitMix64 stream for seed."""
    base = np.uint64(seed & _MASK64)
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = base + idx * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _uniform_from_words(words: np.ndarray) -> np.ndarray:
    # (x >> 11) is below 2**53, so the conversion and scaling are exact.
    return (words >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def _gaussian_from_words(words: np.ndarray) -> np.ndarray:
    # Sum twelve 53-bit numerators as integers (at most 57 bits, no wrap),
    # center, then convert once: a single correctly rounded step.
    numerators = (words >> np.uint64(11)).reshape(-1, 12).sum(axis=1, dtype=np.uint64)
    centered = numerators.astype(np.int64) - np.int64(6 << 53)
    return centered.astype(np.float64) * (2.0 ** -53)


def _duplicate_heavy_block(words: np.ndarray, tie_fraction: float) -> np.ndarray:
    draws = words.reshape(-1, 2)
    threshold = np.uint64(round(tie_fraction * (1 << _TIE_DRAW_BITS)))
    is_tie = (draws[:, 0] >> np.uint64(64 - _TIE_DRAW_BITS)) < threshold
    dictionary = np.asarray(TIE_DICTIONARY, dtype=np.float64)
    tied = dictionary[(draws[:, 0] & np.uint64(15)).astype(np.int64)]
    fresh = _uniform_from_words(draws[:, 1])
    return np.where(is_tie, tied, fresh)


def _special_tail(dist: SpecialValues, width: Width) -> list[int]:
    bits: list[int] = []
    for _ in range(dist.signed_zero_pairs):
        bits.append(zero_value(negative=False, width=width).bits)
        bits.append(zero_value(negative=True, width=width).bits)
    for _ in range(dist.inf_pairs):
        bits.append(inf_value(negative=False, width=width).bits)
        bits.append(inf_value(negative=True, width=width).bits)
    for payload in range(1, dist.nan_count + 1):
        bits.append(nan_value(payload=payload, width=width).bits)
    return bits


def generate(spec: CorpusSpec) -> FloatArray:
    """Produce the corpus for ``spec``; same spec, same bits, anywhere."""
    dist = spec.distribution
    if isinstance(dist, SpecialValues):
        base_n = spec.n - spec._special_count()
    else:
        base_n = spec.n

    words_per_value = {Gaussian: 12, Uniform: 1, DuplicateHeavy: 2, SpecialValues: 1}[
        type(dist)
    ]
    values = np.empty(base_n, dtype=np.float64)
    consumed = 0
    for start in range(0, base_n, _GENERATION_BLOCK):
        stop = min(start + _GENERATION_BLOCK, base_n)
        words = splitmix64(spec.seed, consumed, (stop - start) * words_per_value)
        consumed += words.size
        if isinstance(dist, Gaussian):
            values[start:stop] = _gaussian_from_words(words)
        elif isinstance(dist, DuplicateHeavy):
            values[start:stop] = _duplicate_heavy_block(words, dist.tie_fraction)
        else:
            values[start:stop] = _uniform_from_words(words)

    out = values.astype(spec.width.float_dtype).view(spec.width.bits_dtype)
    if isinstance(dist, SpecialValues):
        tail = np.asarray(_special_tail(dist, spec.width), dtype=spec.width.bits_dtype)
        out = np.concatenate([out, tail])
    return FloatArray(out, spec.width)


def describe(spec: CorpusSpec) -> list[str]:
    """Key=value provenance lines for the sidecar file."""
    dist = spec.distribution
    if isinstance(dist, Gaussian):
        name = "gaussian"
    elif isinstance(dist, Uniform):
        name = "uniform"
    elif isinstance(dist, DuplicateHeavy):
        name = f"dup:{dist.tie_fraction:g}"
    else:
        name = (
            f"special:nan={dist.nan_count},zeros={dist.signed_zero_pairs},"
            f"infs={dist.inf_pairs}"
        )
    return [
        f"distribution={name}",
        f"n={spec.n}",
        f"seed={spec.seed}",
        f"width={'f64' if spec.width is Width.BINARY64 else 'f32'}",
        "generator=splitmix64",
    ]


def write_corpus(spec: CorpusSpec, path: str | Path) -> SequenceDigest:
    """Write the corpus in the binary format plus a .meta provenance sidecar."""
    data = generate(spec)
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(data.tobytes())
    digest = digest_sequence(data)
    sidecar = path.with_name(path.name + ".meta")
    sidecar.write_text(
        "\n".join(describe(spec) + [f"digest={digest}"]) + "\n", encoding="ascii"
    )
    return digest
