"""Generated prefixes of the Kolakoski sequence S and their prefix-sum tables."""

from __future__ import annotations

import logging
import os
import struct
from pathlib import Path
from typing import Union

import numpy as np

from . import _kernels
from .errors import CorruptCache, InsufficientWindow, OutOfWindow, WindowTooLarge
from .words import Word

log = logging.getLogger(__name__)

MAGIC = b"KOLA"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sBQ")

PathLike = Union[str, "os.PathLike[str]"]


class SequenceWindow:
    """Immutable prefix s_1 .. s_length of S.

    Digits are kept bit-packed (one bit per element); the prefix-sum table
    ``prefix_sums[i] = s_1 + ... + s_i`` is a full int64 array, which costs
    8 bytes per element and is the dominant memory term above ~10^9.
    All public positions are 1-based.
    """

    __slots__ = ("_packed", "_length", "_prefix_sums", "_digits")

    def __init__(self, digits: np.ndarray):
        digits = np.ascontiguousarray(digits, dtype=np.uint8)
        self._length = int(digits.size)
        self._packed = np.packbits(digits == 2, bitorder="little")
        ps = np.zeros(self._length + 1, dtype=np.int64)
        np.cumsum(digits, dtype=np.int64, out=ps[1:])
        ps.flags.writeable = False
        self._prefix_sums = ps
        self._digits = None

    @property
    def length(self) -> int:
        return self._length

    def __len__(self) -> int:
        return self._length

    @property
    def prefix_sums(self) -> np.ndarray:
        """Read-only int64 table of length ``length + 1``."""
        return self._prefix_sums

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    @property
    def digits(self) -> np.ndarray:
        """uint8 array of the digits (0-based), unpacked lazily and cached."""
        if self._digits is None:
            d = np.unpackbits(self._packed, count=self._length, bitorder="little") + np.uint8(1)
            d.flags.writeable = False
            self._digits = d
        return self._digits

    def __eq__(self, other) -> bool:
        if not isinstance(other, SequenceWindow):
            return NotImplemented
        return self._length == other._length and np.array_equal(self._packed, other._packed)

    def __repr__(self) -> str:
        head = "".join(map(str, self.digits[:16].tolist()))
        return f"SequenceWindow(length={self._length}, head='{head}')"

    def _check(self, i: int, lo: int, hi: int, what: str) -> None:
        if not lo <= i <= hi:
            raise OutOfWindow(f"{what} {i} outside [{lo}, {hi}] (window length {self._length})")

    def element(self, i: int) -> int:
        self._check(i, 1, self._length, "position")
        return int(self._prefix_sums[i] - self._prefix_sums[i - 1])

    def prefix_sum(self, i: int) -> int:
        self._check(i, 0, self._length, "prefix length")
        return int(self._prefix_sums[i])

    def is_run_end(self, i: int) -> bool:
        """True iff s_i != s_{i+1}."""
        self._check(i, 1, self._length - 1, "position")
        ps = self._prefix_sums
        return bool(ps[i] - ps[i - 1] != ps[i + 1] - ps[i])

    def word(self, start: int, end: int) -> Word:
        """s_start .. s_end as a :class:`Word` (empty when end = start - 1)."""
        if end < start - 1 or start < 1:
            raise OutOfWindow(f"bad range ({start}, {end})")
        self._check(end, 0, self._length, "end position")
        return Word.from_array(self.digits[start - 1:end])

    def prefix(self, n: int) -> Word:
        return self.word(1, n)

    def ones(self, start: int, end: int) -> int:
        """Number of 1s among s_start .. s_end (2 * length - digit sum)."""
        ps = self._prefix_sums
        return int(2 * (end - start + 1) - (ps[end] - ps[start - 1]))

    def iterate(self, x: int, depth: int) -> int:
        """The depth-fold map x -> prefix_sums[x], checked against the window."""
        for h in range(depth):
            if x > self._length:
                raise InsufficientWindow(
                    _extrapolate(x, depth - h), self._length, f"level {h} of the prefix-sum map"
                )
            x = int(self._prefix_sums[x])
        return x

    def level_maps(self, points, depth: int) -> np.ndarray:
        return _kernels.level_maps(self._prefix_sums, np.asarray(points, dtype=np.int64), depth)

    # -- validation --------------------------------------------------------

    def validate(self, samples: int = 4096, seed: int = 0) -> None:
        """Re-check the sequence invariants; raise ValueError on violation.

        The no-triple-run check is exhaustive.  Self-description (the run
        boundaries are exactly the prefix-sum values) is exhaustive up to
        ``samples`` runs and sampled at random beyond.
        """
        d = self.digits
        n = self._length
        head = np.array([1, 2, 2], dtype=np.uint8)[:n]
        if not np.array_equal(d[: head.size], head):
            raise ValueError("window does not start with 122")
        if n >= 3:
            triple = (d[:-2] == d[1:-1]) & (d[1:-1] == d[2:])
            if triple.any():
                i = int(np.flatnonzero(triple)[0]) + 1
                raise ValueError(f"run of length >= 3 starting at position {i}")
        ends = np.flatnonzero(d[:-1] != d[1:]) + 1
        ps = self._prefix_sums
        # run j (1-based) ends at ps[j]; only runs ending before position n are decidable
        nruns = int(np.searchsorted(ps, n - 1, side="right")) - 1
        nruns = min(nruns, ends.size)
        if nruns <= 0:
            return
        idx = np.arange(1, min(nruns, samples) + 1)
        if nruns > samples:
            rng = np.random.default_rng(seed)
            idx = np.concatenate([idx, rng.integers(samples + 1, nruns + 1, size=samples)])
        bad = ps[idx] != ends[idx - 1]
        if bad.any():
            j = int(idx[np.flatnonzero(bad)[0]])
            raise ValueError(f"run {j} does not end at prefix_sum({j}) = {int(ps[j])}")


def _extrapolate(x: int, levels: int) -> int:
    # prefix sums of S grow by at least 6/5 per level once past the first few digits
    return int(x * (6 / 5) ** max(levels - 1, 0))


def generate(n: int) -> SequenceWindow:
    """Window holding the first ``n`` elements of S."""
    n = int(n)
    if n < 1:
        raise ValueError("window length must be positive")
    try:
        return SequenceWindow(_kernels.generate_digits(n))
    except MemoryError as exc:
        raise WindowTooLarge(f"cannot materialize {n} elements: {exc}") from exc


def window_for(end: int, depth: int, max_length: int = 10**7) -> SequenceWindow:
    """Window on which a depth-``depth`` parity history at ``end`` is computable.

    That needs the (depth - 1)-fold prefix-sum map of ``end`` to stay inside
    the window.  The window is grown geometrically until it does; more than
    ``max_length`` elements raises :class:`InsufficientWindow`.
    """
    size = max(int(end), 64)
    while True:
        size = min(size, max_length)
        win = generate(size)
        x, h = int(end), 0
        while h < depth - 1 and x <= win.length:
            x = int(win.prefix_sums[x])
            h += 1
        if x <= win.length:
            return win
        if size >= max_length:
            raise InsufficientWindow(
                _extrapolate(x, depth - 1 - h), max_length, f"depth {depth} at position {end}"
            )
        size = max(2 * size, int(1.25 * x))


# -- cache files ---------------------------------------------------------------

def save_cache(win: SequenceWindow, destination: PathLike) -> None:
    """Write the bit-exact cache format: magic, version, u64 count, packed digits."""
    with open(destination, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, CACHE_VERSION, win.length))
        fh.write(win.packed.tobytes())


def load_cache(source: PathLike, validate: bool = True) -> SequenceWindow:
    data = Path(source).read_bytes()
    if len(data) < _HEADER.size:
        raise CorruptCache(f"{source}: file shorter than header")
    magic, version, count = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptCache(f"{source}: bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise CorruptCache(f"{source}: unsupported version {version}")
    body = np.frombuffer(data, dtype=np.uint8, offset=_HEADER.size)
    if count == 0 or body.size != (count + 7) // 8:
        raise CorruptCache(f"{source}: {body.size} payload bytes for {count} elements")
    pad = count % 8
    if pad and body[-1] >> pad:
        raise CorruptCache(f"{source}: non-zero padding bits")
    digits = np.unpackbits(body, count=count, bitorder="little") + np.uint8(1)
    win = SequenceWindow(digits)
    if validate:
        try:
            win.validate()
        except ValueError as exc:
            raise CorruptCache(f"{source}: {exc}") from exc
    log.debug("loaded %d elements from %s", count, source)
    return win
