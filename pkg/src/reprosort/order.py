"""Total ordering of IEEE-754 bit patterns and the key encoding that linearizes it.

Every bit pattern of a given width sits on one line:

    -NaN .. -inf .. negative finites .. -0 < +0 .. positive finites .. +inf .. +NaN

NaNs are ordered by their encoded bits (sign, then quiet bit, then payload).
Equality is bit identity, so -0 and +0 are distinct ordered values, as are
NaNs with different payloads.

The order is realized by a bijective key transform that is part of the public
determinism contract.  For binary64:

    key = ~bits                          if the sign bit is set
    key = bits XOR 0x8000000000000000    otherwise

(and the analogous transform with 0x80000000 for binary32).  Unsigned
comparison of keys is exactly the total order; decoding a key recovers the
original bits.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import UsageError, WidthMismatchError


class Width(enum.Enum):
    """Interchange width of an IEEE-754 value: binary32 or binary64."""

    BINARY32 = 32
    BINARY64 = 64

    @property
    def nbytes(self) -> int:
        return self.value // 8

    @property
    def mantissa_bits(self) -> int:
        return 52 if self is Width.BINARY64 else 23

    @property
    def full_mask(self) -> int:
        return (1 << self.value) - 1

    @property
    def sign_mask(self) -> int:
        return 1 << (self.value - 1)

    @property
    def mantissa_mask(self) -> int:
        return (1 << self.mantissa_bits) - 1

    @property
    def exponent_mask(self) -> int:
        return self.full_mask ^ self.sign_mask ^ self.mantissa_mask

    @property
    def quiet_bit(self) -> int:
        return 1 << (self.mantissa_bits - 1)

    @property
    def eps(self) -> float:
        """Machine epsilon of the format (2**-52 or 2**-23)."""
        return 2.0 ** -self.mantissa_bits

    @property
    def bits_dtype(self) -> np.dtype:
        return np.dtype(np.uint64 if self is Width.BINARY64 else np.uint32)

    @property
    def le_bits_dtype(self) -> np.dtype:
        """Little-endian unsigned dtype; the on-disk and digest byte order."""
        return np.dtype("<u8" if self is Width.BINARY64 else "<u4")

    @property
    def float_dtype(self) -> np.dtype:
        return np.dtype(np.float64 if self is Width.BINARY64 else np.float32)

    @property
    def struct_format(self) -> str:
        return "<d" if self is Width.BINARY64 else "<f"

    @classmethod
    def from_flag(cls, flag: str) -> "Width":
        """Parse the CLI spelling: 'f64' or 'f32'."""
        try:
            return {"f32": cls.BINARY32, "f64": cls.BINARY64}[flag]
        except KeyError:
            raise UsageError(f"unknown width flag {flag!r}; expected f32 or f64") from None


@dataclass(frozen=True, slots=True)
class FloatValue:
    """One IEEE-754 value carried as its exact bit pattern.

    The bits are never canonicalized: NaN payloads, the quiet bit, and the
    sign of zero all survive round trips.
    """

    bits: int
    width: Width

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= self.width.full_mask:
            raise UsageError(
                f"bits 0x{self.bits:x} out of range for {self.width.name.lower()}"
            )

    @classmethod
    def from_float(cls, value: float, width: Width = Width.BINARY64) -> "FloatValue":
        raw = struct.pack(width.struct_format, value)
        return cls(int.from_bytes(raw, "little"), width)

    def to_float(self) -> float:
        raw = self.bits.to_bytes(self.width.nbytes, "little")
        return struct.unpack(self.width.struct_format, raw)[0]

    @property
    def sign(self) -> int:
        return 1 if self.bits & self.width.sign_mask else 0

    @property
    def is_nan(self) -> bool:
        w = self.width
        return (self.bits & w.exponent_mask) == w.exponent_mask and bool(
            self.bits & w.mantissa_mask
        )

    def __repr__(self) -> str:
        hexwidth = self.width.nbytes * 2
        return f"FloatValue(0x{self.bits:0{hexwidth}x}, {self.width.name})"


def zero_value(negative: bool = False, width: Width = Width.BINARY64) -> FloatValue:
    return FloatValue(width.sign_mask if negative else 0, width)


def inf_value(negative: bool = False, width: Width = Width.BINARY64) -> FloatValue:
    bits = width.exponent_mask | (width.sign_mask if negative else 0)
    return FloatValue(bits, width)


def nan_value(
    payload: int = 0,
    quiet: bool = True,
    negative: bool = False,
    width: Width = Width.BINARY64,
) -> FloatValue:
    """Build a NaN with an explicit payload (the low mantissa bits).

    A signaling NaN must carry a non-zero payload, otherwise the pattern
    would encode an infinity.
    """
    payload_mask = width.quiet_bit - 1
    if not 0 <= payload <= payload_mask:
        raise UsageError(f"NaN payload 0x{payload:x} does not fit {width.name.lower()}")
    if not quiet and payload == 0:
        raise UsageError("signaling NaN needs a non-zero payload")
    bits = width.exponent_mask | payload
    if quiet:
        bits |= width.quiet_bit
    if negative:
        bits |= width.sign_mask
    return FloatValue(bits, width)


def encode_key(v: FloatValue) -> int:
    """Map a bit pattern to its order key.

    Unsigned comparison of keys equals the total order; the map is a
    bijection, see :func:`decode_key`.
    """
    if v.bits & v.width.sign_mask:
        return v.bits ^ v.width.full_mask
    return v.bits ^ v.width.sign_mask


def decode_key(key: int, width: Width) -> FloatValue:
    """Invert :func:`encode_key`, recovering the exact original bits."""
    if not 0 <= key <= width.full_mask:
        raise UsageError(f"key 0x{key:x} out of range for {width.name.lower()}")
    if key & width.sign_mask:
        return FloatValue(key ^ width.sign_mask, width)
    return FloatValue(key ^ width.full_mask, width)


def _check_widths(a: FloatValue, b: FloatValue) -> None:
    if a.width is not b.width:
        raise WidthMismatchError(
            f"cannot compare {a.width.name.lower()} with {b.width.name.lower()}"
        )


def cmp_total(a: FloatValue, b: FloatValue) -> int:
    """Three-way comparison under the total order: -1, 0, or 1.

    Zero means the operands are bit-identical; -0/+0 and distinct-payload
    NaNs are ordered, never equal.
    """
    _check_widths(a, b)
    ka, kb = encode_key(a), encode_key(b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def value_equal(a: FloatValue, b: FloatValue) -> bool:
    """Bit-identity predicate used to form tie groups."""
    _check_widths(a, b)
    return a.bits == b.bits


def encode_key_array(bits: np.ndarray, width: Width) -> np.ndarray:
    """Vectorized :func:`encode_key` over an array of bit patterns.

    Negative patterns are complemented, non-negative ones get the sign bit
    flipped; both collapse into one XOR with a sign-dependent mask.
    """
    shift = np.uint8(width.value - 1)
    sign = width.bits_dtype.type(width.sign_mask)
    low = width.bits_dtype.type(width.sign_mask - 1)
    mask = bits >> shift
    mask *= low
    mask |= sign
    mask ^= bits
    return mask


def decode_key_array(keys: np.ndarray, width: Width) -> np.ndarray:
    shift = np.uint8(width.value - 1)
    sign = width.bits_dtype.type(width.sign_mask)
    low = width.bits_dtype.type(width.sign_mask - 1)
    one = width.bits_dtype.type(1)
    mask = keys >> shift
    mask ^= one  # keys with the top bit clear came from negative patterns
    mask *= low
    mask |= sign
    mask ^= keys
    return mask


class FloatArray:
    """A same-width sequence of IEEE-754 values stored as raw bit patterns.

    This is the unit the sorting and metric routines operate on.  The bits
    array is treated as immutable; operations return new arrays.
    """

    __slots__ = ("bits", "width")

    def __init__(self, bits: np.ndarray, width: Width):
        arr = np.asarray(bits)
        if arr.dtype != width.bits_dtype:
            if arr.dtype.kind not in ("u", "i", "O"):
                raise UsageError(
                    "bits must be integer patterns; use from_floats for values"
                )
            arr = arr.astype(width.bits_dtype)
        if arr.ndim != 1:
            raise UsageError("bits must be one-dimensional")
        self.bits = arr
        self.width = width

    @classmethod
    def from_floats(cls, values: Iterable[float], width: Width = Width.BINARY64) -> "FloatArray":
        floats = np.asarray(list(values), dtype=width.float_dtype)
        return cls(floats.view(width.bits_dtype), width)

    @classmethod
    def from_values(cls, values: Iterable[FloatValue], width: Width | None = None) -> "FloatArray":
        items = list(values)
        if items:
            widths = {v.width for v in items}
            if len(widths) > 1:
                raise WidthMismatchError("mixed widths in one sequence")
            width = items[0].width
        elif width is None:
            width = Width.BINARY64
        return cls(np.asarray([v.bits for v in items], dtype=width.bits_dtype), width)

    def keys(self) -> np.ndarray:
        """Order keys of all elements; unsigned ascending = total order."""
        return encode_key_array(self.bits, self.width)

    def to_floats(self) -> np.ndarray:
        return self.bits.view(self.width.float_dtype)

    def tobytes(self) -> bytes:
        """Little-endian serialization; the canonical digest and file bytes."""
        return self.bits.astype(self.width.le_bits_dtype, copy=False).tobytes()

    def __len__(self) -> int:
        return self.bits.size

    def __iter__(self) -> Iterator[FloatValue]:
        for b in self.bits:
            yield FloatValue(int(b), self.width)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return FloatArray(self.bits[index], self.width)
        return FloatValue(int(self.bits[index]), self.width)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FloatArray):
            return NotImplemented
        return self.width is other.width and np.array_equal(self.bits, other.bits)

    def __repr__(self) -> str:
        preview = ", ".join(f"0x{int(b):x}" for b in self.bits[:4])
        tail = ", ..." if len(self) > 4 else ""
        return f"FloatArray([{preview}{tail}], n={len(self)}, {self.width.name})"


def check_same_width(a: FloatArray, b: FloatArray) -> None:
    if a.width is not b.width:
        raise WidthMismatchError(
            f"cannot combine {a.width.name.lower()} with {b.width.name.lower()}"
        )
