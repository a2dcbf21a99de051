"""Out-of-core sorting under a memory budget.

Run formation reads maximal budget-sized chunks, sorts each in memory, and
spills them as run files numbered in input order.  The k-way merge streams
the runs back, ordering elements by (order key, run index, position in run),
so an equal key is always drawn from the earlier run first.  Multi-pass
merging groups runs in ascending index order and the merged result inherits
the smallest constituent index, which makes any fan-in produce the same
bytes as a single full-fan-in merge.

All structure (run count, grouping, pass count) is a pure function of input
size, budget, and fan-in; data values never influence it.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO

import numpy as np

from .core import sort_keys_inplace
from .errors import RunIntegrityError, UsageError
from .fileio import element_count, iter_blocks, read_block
from .order import FloatArray, Width, decode_key_array, encode_key_array


@dataclass(frozen=True)
class RunDescriptor:
    """One sorted on-disk run: 0-based creation order, element count, file."""

    index: int
    count: int
    path: Path


@dataclass(frozen=True)
class ExternalConfig:
    memory_budget_bytes: int
    spill_dir: Path
    fan_in: int = 16
    io_buffer_bytes: int = 1 << 20

    def __post_init__(self) -> None:
        if self.memory_budget_bytes <= 0:
            raise UsageError("memory budget must be positive")
        if self.fan_in < 2:
            raise UsageError("fan-in must be at least 2")
        if self.io_buffer_bytes <= 0:
            raise UsageError("io buffer must be positive")
        object.__setattr__(self, "spill_dir", Path(self.spill_dir))

    def chunk_elements(self, width: Width) -> int:
        capacity = self.memory_budget_bytes // width.nbytes
        if capacity < 1:
            raise UsageError(
                f"budget of {self.memory_budget_bytes} bytes does not admit one "
                f"{width.nbytes}-byte element"
            )
        return capacity

    def block_elements(self, width: Width) -> int:
        return max(1, self.io_buffer_bytes // width.nbytes)


@dataclass(frozen=True)
class ExternalSummary:
    elements: int
    runs: int
    passes: int


def run_path(spill_dir: Path, index: int) -> Path:
    return Path(spill_dir) / f"run_{index:06d}.bin"


def form_runs(input_path: str | Path, width: Width, cfg: ExternalConfig) -> list[RunDescriptor]:
    """Split the input into sorted runs of at most budget//element_size elements.

    Chunking is purely size based, so identical input and budget always
    yield identical run files.
    """
    capacity = cfg.chunk_elements(width)
    cfg.spill_dir.mkdir(parents=True, exist_ok=True)
    runs: list[RunDescriptor] = []
    for index, bits in enumerate(iter_blocks(input_path, width, capacity)):
        keys = sort_keys_inplace(encode_key_array(bits, width))
        sorted_bits = decode_key_array(keys, width)
        path = run_path(cfg.spill_dir, index)
        with open(path, "wb") as fh:
            fh.write(FloatArray(sorted_bits, width).tobytes())
        runs.append(RunDescriptor(index, int(bits.size), path))
    return runs


class _RunCursor:
    """Sequential front-to-back reader over one run, with order checking.

    Holds at most one refill block plus whatever an earlier round left
    unconsumed; never seeks.
    """

    def __init__(self, run: RunDescriptor, width: Width, block_elements: int):
        self.run = run
        self.width = width
        self.block = block_elements
        self.remaining = run.count
        self.bits = np.empty(0, dtype=width.bits_dtype)
        self.keys = np.empty(0, dtype=width.bits_dtype)
        self._last_key: int | None = None  # largest key handed out so far
        self._fh: BinaryIO | None = open(run.path, "rb")

    @property
    def exhausted_file(self) -> bool:
        return self.remaining == 0

    @property
    def empty(self) -> bool:
        return self.keys.size == 0

    @property
    def last_buffered_key(self) -> int:
        return int(self.keys[-1])

    def refill(self) -> None:
        if self.remaining == 0:
            return
        want = min(self.block, self.remaining)
        bits = read_block(self._fh, self.width, want)
        if bits.size < want:
            raise RunIntegrityError(
                f"run {self.run.index} ({self.run.path}) is truncated"
            )
        keys = encode_key_array(bits, self.width)
        if keys.size > 1 and not np.all(keys[:-1] <= keys[1:]):
            raise RunIntegrityError(
                f"run {self.run.index} ({self.run.path}) is not sorted"
            )
        if self._last_key is not None and keys.size and int(keys[0]) < self._last_key:
            raise RunIntegrityError(
                f"run {self.run.index} ({self.run.path}) is not sorted across blocks"
            )
        if keys.size:
            self._last_key = int(keys[-1])
        self.bits = np.concatenate([self.bits, bits])
        self.keys = np.concatenate([self.keys, keys])
        self.remaining -= int(bits.size)
        if self.remaining == 0:
            self.close()

    def take_up_to(self, key: int, inclusive: bool) -> tuple[np.ndarray, np.ndarray]:
        side = "right" if inclusive else "left"
        cut = int(np.searchsorted(self.keys, self.width.bits_dtype.type(key), side=side))
        taken = self.bits[:cut], self.keys[:cut]
        self.bits = self.bits[cut:]
        self.keys = self.keys[cut:]
        return taken

    def take_all(self) -> tuple[np.ndarray, np.ndarray]:
        taken = self.bits, self.keys
        self.bits = np.empty(0, dtype=self.width.bits_dtype)
        self.keys = np.empty(0, dtype=self.width.bits_dtype)
        return taken

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


def _merge_once(runs: list[RunDescriptor], out: BinaryIO, width: Width, cfg: ExternalConfig) -> int:
    """Stream-merge one group of runs into ``out``; returns elements written.

    Invariant: an element may be emitted only once no earlier element can
    still arrive.  Let the guard be the smallest last-buffered key among
    runs with file data left.  Everything below the guard is safe from any
    run; elements equal to the guard are safe only from runs up to and
    including the first unfinished run sitting at the guard, because later
    runs must wait for it to drain its tie stretch.
    """
    cursors = [_RunCursor(r, width, cfg.block_elements(width)) for r in runs]
    written = 0
    try:
        while True:
            for c in cursors:
                if c.empty and not c.exhausted_file:
                    c.refill()
            active = [c for c in cursors if not c.empty]
            if not active:
                break
            unfinished = [c for c in active if not c.exhausted_file]
            pieces: list[tuple[np.ndarray, np.ndarray]] = []
            if unfinished:
                guard = min(c.last_buffered_key for c in unfinished)
                gate = next(
                    c for c in unfinished if c.last_buffered_key == guard
                )
                for c in active:
                    if c.run.index <= gate.run.index:
                        pieces.append(c.take_up_to(guard, inclusive=True))
                    else:
                        pieces.append(c.take_up_to(guard, inclusive=False))
            else:
                pieces = [c.take_all() for c in active]
            bits = np.concatenate([b for b, _ in pieces])
            keys = np.concatenate([k for _, k in pieces])
            if bits.size == 0:
                continue
            order = np.argsort(keys, kind="stable")
            chunk = FloatArray(bits[order], width)
            out.write(chunk.tobytes())
            written += len(chunk)
    finally:
        for c in cursors:
            c.close()
    return written


def kway_merge(
    runs: list[RunDescriptor], out: BinaryIO, width: Width, cfg: ExternalConfig
) -> int:
    """Merge sorted runs into ``out``, multi-pass when count exceeds fan-in.

    Passes group runs in ascending index order into consecutive groups of
    fan_in; a merged group inherits its smallest constituent index.  The
    result is byte-identical for every fan-in.
    """
    if not runs:
        return 0
    current = list(runs)
    pass_dirs: list[Path] = []
    pass_number = 0
    try:
        while len(current) > cfg.fan_in:
            pass_number += 1
            pass_dir = cfg.spill_dir / f"pass_{pass_number:03d}"
            pass_dir.mkdir(parents=True, exist_ok=True)
            pass_dirs.append(pass_dir)
            merged: list[RunDescriptor] = []
            for at in range(0, len(current), cfg.fan_in):
                group = current[at : at + cfg.fan_in]
                inherited = group[0].index
                path = run_path(pass_dir, inherited)
                with open(path, "wb") as fh:
                    count = _merge_once(group, fh, width, cfg)
                merged.append(RunDescriptor(inherited, count, path))
            current = merged
        return _merge_once(current, out, width, cfg)
    finally:
        for d in pass_dirs:
            shutil.rmtree(d, ignore_errors=True)


def external_sort(
    input_path: str | Path,
    output_path: str | Path,
    width: Width,
    cfg: ExternalConfig,
) -> ExternalSummary:
    """Sort a binary float file under the memory budget.

    The output is byte-identical to an in-memory sort of the same data.
    Spill files are removed on success; on failure the partial output is
    removed and runs are left behind for inspection.
    """
    total = element_count(input_path, width)  # reject malformed input up front
    output_path = Path(output_path)
    runs = form_runs(input_path, width, cfg)
    passes = 1
    count = len(runs)
    while count > cfg.fan_in:
        passes += 1
        count = -(-count // cfg.fan_in)
    try:
        with open(output_path, "wb") as fh:
            written = kway_merge(runs, fh, width, cfg)
    except BaseException:
        output_path.unlink(missing_ok=True)
        raise
    if written != total:
        output_path.unlink(missing_ok=True)
        raise RunIntegrityError(
            f"merged {written} elements but input holds {total}"
        )
    for r in runs:
        r.path.unlink(missing_ok=True)
    try:
        cfg.spill_dir.rmdir()  # only if nothing else lives there
    except OSError:
        pass
    return ExternalSummary(elements=written, runs=len(runs), passes=passes)
