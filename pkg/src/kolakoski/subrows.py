"""S-integrals and S-derivatives of occurrences inside S.

Everything here works on index pairs.  The S-integral of the subrow
(start, end) is (prefix_sum(start - 1) + 1, prefix_sum(end)), so iterating
it costs one table lookup per endpoint and level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import SequenceWindow
from .errors import InsufficientWindow, NoSDerivative, OutOfWindow
from .words import Word


@dataclass(frozen=True, order=True)
class SubrowRef:
    """The occurrence s_start .. s_end (1-based, inclusive)."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 1 or self.end < self.start:
            raise ValueError(f"invalid subrow ({self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start + 1

    @property
    def before(self) -> int:
        """Length of the prefix preceding the occurrence."""
        return self.start - 1

    def __str__(self) -> str:
        return f"({self.start},{self.end})"


def _require(win: SequenceWindow, r: SubrowRef, need: int) -> None:
    if need > win.length:
        raise OutOfWindow(f"subrow {r} needs position {need}, window length {win.length}")


def s_integral(win: SequenceWindow, r: SubrowRef) -> SubrowRef:
    _require(win, r, r.end)
    ps = win.prefix_sums
    return SubrowRef(int(ps[r.start - 1]) + 1, int(ps[r.end]))


def s_integral_n(win: SequenceWindow, r: SubrowRef, n: int) -> SubrowRef:
    if n < 0:
        raise ValueError("number of integrations must be non-negative")
    cur = r
    for depth in range(n):
        if cur.end > win.length:
            raise OutOfWindow(
                f"S-integral of {r} at depth {depth + 1} needs position {cur.end}, "
                f"window length {win.length}"
            )
        cur = s_integral(win, cur)
    return cur


def has_s_derivative(win: SequenceWindow, r: SubrowRef) -> bool:
    _require(win, r, r.end + 1)
    left_ok = r.start == 1 or win.is_run_end(r.start - 1)
    return left_ok and win.is_run_end(r.end)


def s_derivative(win: SequenceWindow, r: SubrowRef) -> SubrowRef:
    """The unique subrow whose S-integral is ``r``.

    It exists iff ``r`` starts and ends on run boundaries of S; the two
    boundaries are then prefix-sum values and are inverted by binary search.
    The last element of the window has no known successor, so a subrow
    ending there raises :class:`OutOfWindow`.
    """
    if not has_s_derivative(win, r):
        raise NoSDerivative(f"subrow {r} does not start and end on run boundaries")
    ps = win.prefix_sums
    h = int(np.searchsorted(ps, r.start - 1))
    j = int(np.searchsorted(ps, r.end))
    assert ps[h] == r.start - 1 and ps[j] == r.end, "run boundary missing from prefix sums"
    return SubrowRef(h + 1, j)


def s_derivative_many(win: SequenceWindow, starts: np.ndarray, ends: np.ndarray):
    """Vectorised S-derivative.

    Returns ``(mask, new_starts, new_ends)``; entries where ``mask`` is False
    have no S-derivative and hold -1.
    """
    starts = np.asarray(starts, dtype=np.int64)
    ends = np.asarray(ends, dtype=np.int64)
    if ends.size and ends.max() + 1 > win.length:
        raise OutOfWindow(f"subrow end {int(ends.max())} has no successor inside the window")
    d = win.digits
    left = (starts == 1) | (d[np.maximum(starts - 2, 0)] != d[starts - 1])
    right = d[ends - 1] != d[ends]
    mask = left & right
    ps = win.prefix_sums
    h = np.searchsorted(ps, starts - 1)
    j = np.searchsorted(ps, ends)
    new_starts = np.where(mask, h + 1, -1)
    new_ends = np.where(mask, j, -1)
    return mask, new_starts, new_ends


def materialize(win: SequenceWindow, r: SubrowRef) -> Word:
    _require(win, r, r.end)
    return win.word(r.start, r.end)


def integral_is_mirrored(r: SubrowRef) -> bool:
    """Whether the word of the S-integral is the mirrored integral of the word."""
    return r.before % 2 == 1


def integral_lengths(win: SequenceWindow, r: SubrowRef, depth: int) -> list[int]:
    """|r|, |r^{-1}_S|, ..., |r^{-depth}_S|."""
    maps = win.level_maps([r.start - 1, r.end], depth)
    if (maps[:, 1] < 0).any():
        lvl = int(np.flatnonzero(maps[:, 1] < 0)[0])
        raise InsufficientWindow(int(maps[lvl - 1, 1]), win.length, f"level {lvl} integral of {r}")
    return [int(x) for x in maps[:, 1] - maps[:, 0]]
