"""Canonical digests used to assert byte identity of outputs.

Digests are SHA-256 over the little-endian serialization of each element's
bits in sequence order, so they are meaningful across architectures and
independent of host byte order.  NaN payloads and zero signs affect the
digest; that is the point.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .fileio import element_count
from .order import FloatArray, Width

_CHUNK_BYTES = 1 << 20


@dataclass(frozen=True)
class SequenceDigest:
    algorithm: str
    hex: str

    def __str__(self) -> str:
        return f"{self.algorithm}:{self.hex}"


def digest_sequence(s: FloatArray) -> SequenceDigest:
    """SHA-256 of the sequence's little-endian bytes."""
    return SequenceDigest("sha256", hashlib.sha256(s.tobytes()).hexdigest())


def digest_file(path: str | Path, width: Width) -> SequenceDigest:
    """Streaming SHA-256 of a binary float file.

    Equals digest_sequence of the decoded content; a trailing partial
    element is rejected before any hashing.
    """
    element_count(path, width)
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        while True:
            chunk = fh.read(_CHUNK_BYTES)
            if not chunk:
                break
            h.update(chunk)
    return SequenceDigest("sha256", h.hexdigest())
