"""Raw binary float files: contiguous little-endian IEEE-754 values, no header.

The width is declared out of band (a CLI flag); the element count is the
file size divided by the element size.  A size that does not divide evenly
is a format error, never silently truncated.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import BinaryIO, Iterator

import numpy as np

from .errors import FormatError
from .order import FloatArray, Width


def element_count(path: str | Path, width: Width) -> int:
    size = os.path.getsize(path)
    count, leftover = divmod(size, width.nbytes)
    if leftover:
        raise FormatError(
            f"{path}: size {size} is not a multiple of {width.nbytes}-byte elements"
        )
    return count


def read_array(path: str | Path, width: Width) -> FloatArray:
    """Load a whole file; bit patterns pass through untouched."""
    n = element_count(path, width)
    bits = np.fromfile(str(path), dtype=width.le_bits_dtype, count=n)
    return FloatArray(bits.astype(width.bits_dtype, copy=False), width)


def write_array(path: str | Path, data: FloatArray) -> None:
    with open(path, "wb") as fh:
        fh.write(data.tobytes())


def read_block(fh: BinaryIO, width: Width, max_elements: int) -> np.ndarray:
    """Read up to max_elements from the current position, as native bits."""
    raw = fh.read(max_elements * width.nbytes)
    if len(raw) % width.nbytes:
        raise FormatError("truncated element at end of stream")
    bits = np.frombuffer(raw, dtype=width.le_bits_dtype)
    return bits.astype(width.bits_dtype, copy=False)


def iter_blocks(path: str | Path, width: Width, block_elements: int) -> Iterator[np.ndarray]:
    """Yield the file front to back in blocks of at most block_elements."""
    element_count(path, width)  # validate size before streaming
    with open(path, "rb") as fh:
        while True:
            bits = read_block(fh, width, block_elements)
            if bits.size == 0:
                return
            yield bits
