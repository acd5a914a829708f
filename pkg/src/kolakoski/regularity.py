"""Parity histories, k-regular / k-normal classification and prefix searches.

A subrow r = (a, b) has S-integral lengths L_h(b) - L_h(a - 1), where
L_0(i) = i and L_{h+1}(i) = prefix_sum(L_h(i)).  Bit h of its parity history
is that length mod 2.  r is k-regular when bits 0..k are all 0 and k-normal
when, in addition, bit k + 1 is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .engine import SequenceWindow
from .errors import InsufficientWindow, NotFoundWithin, OutOfWindow
from .subrows import SubrowRef

NOT_REGULAR = -1
"""Normality order of a subrow of odd length (not even 0-regular)."""


class AtLeast(NamedTuple):
    """Normality order not determined: the subrow is ``order``-regular."""

    order: int

    def __str__(self) -> str:
        return f">={self.order}"


Order = Union[int, AtLeast]


@dataclass(frozen=True)
class ParityHistory:
    bits: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.bits) - 1

    def is_regular(self, k: int) -> bool:
        if k > self.depth:
            raise ValueError(f"history of depth {self.depth} cannot certify {k}-regularity")
        return not any(self.bits[: k + 1])

    def first_odd(self) -> Optional[int]:
        for h, b in enumerate(self.bits):
            if b:
                return h
        return None

    def order(self) -> Order:
        """Normality order readable from this history."""
        h = self.first_odd()
        if h is None:
            return AtLeast(self.depth)
        return h - 1


@dataclass(frozen=True)
class RegularityReport:
    subrow: SubrowRef
    history: ParityHistory
    normality_order: Order

    def as_dict(self) -> dict:
        order = self.normality_order
        return {
            "subrow": [self.subrow.start, self.subrow.end],
            "history": list(self.history.bits),
            "normality_order": order if isinstance(order, int) else None,
            "at_least": order.order if isinstance(order, AtLeast) else None,
        }


# ---------------------------------------------------------------------------
# histories
# ---------------------------------------------------------------------------

def history_matrix(win: SequenceWindow, before: np.ndarray, ends: np.ndarray, depth: int) -> np.ndarray:
    """Parity histories of many subrows at once.

    ``before`` holds start - 1 for each subrow.  The result has shape
    (len(ends), depth + 1) with entries 0, 1, or -1 where the window is too
    short to decide.
    """
    before = np.asarray(before, dtype=np.int64)
    ends = np.asarray(ends, dtype=np.int64)
    lo = win.level_maps(before, depth)
    hi = win.level_maps(ends, depth)
    bits = ((hi - lo) & 1).astype(np.int8)
    bits[(hi < 0) | (lo < 0)] = -1
    return bits.T


def parity_history(win: SequenceWindow, r: SubrowRef, depth: int) -> ParityHistory:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if r.end > win.length:
        raise OutOfWindow(f"subrow {r} beyond window length {win.length}")
    row = history_matrix(win, [r.start - 1], [r.end], depth)[0]
    if (row < 0).any():
        h = int(np.flatnonzero(row < 0)[0])
        raise InsufficientWindow(_need(win, r.end, h), win.length, f"bit {h} of the parity history of {r}")
    return ParityHistory(tuple(int(b) for b in row))


def normality_order(win: SequenceWindow, r: SubrowRef, cap: int) -> Order:
    """k such that r is k-normal, for k <= cap.

    Returns :data:`NOT_REGULAR` for odd-length subrows and ``AtLeast(cap + 1)``
    when r is still regular at depth cap + 1.  Infinite regularity is never
    certified.
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    return parity_history(win, r, cap + 1).order()


def classify(win: SequenceWindow, r: SubrowRef, depth: int) -> RegularityReport:
    hist = parity_history(win, r, depth)
    return RegularityReport(r, hist, hist.order())


def prefix_orders(win: SequenceWindow, lengths: np.ndarray, cap: int) -> np.ndarray:
    """Normality orders of the prefixes of the given lengths.

    Entries are -1 for odd lengths, k for k-normal prefixes with k <= cap,
    and cap + 1 for prefixes that are (cap + 1)-regular.  Raises
    :class:`InsufficientWindow` if some needed history bit is undecidable.
    """
    lengths = np.asarray(lengths, dtype=np.int64)
    bits = history_matrix(win, np.zeros_like(lengths), lengths, cap + 1)
    if (bits < 0).any():
        bad = int(lengths[np.flatnonzero((bits < 0).any(axis=1))[0]])
        raise InsufficientWindow(_need(win, bad, cap + 1), win.length, f"depth {cap + 1} history of prefix {bad}")
    odd = bits == 1
    first = np.where(odd.any(axis=1), odd.argmax(axis=1), cap + 2)
    return first - 1


def _need(win: SequenceWindow, end: int, depth: int) -> int:
    x = end
    for _ in range(depth - 1):
        if x > win.length:
            return int(x * 1.2)
        x = int(win.prefix_sums[x])
    return x


# ---------------------------------------------------------------------------
# prefix searches
# ---------------------------------------------------------------------------

_CHUNK = 1 << 15


def _scan_even_prefixes(win, depth, accept, limit, what):
    """Least even n <= limit whose depth-``depth`` history satisfies ``accept``."""
    upper = win.length if limit is None else min(limit, win.length)
    n = 2
    while n <= upper:
        cand = np.arange(n, min(n + 2 * _CHUNK, upper + 1), 2, dtype=np.int64)
        bits = history_matrix(win, np.zeros_like(cand), cand, depth)
        unknown = (bits < 0).any(axis=1)
        hit = accept(bits) & ~unknown
        first_unknown = int(np.argmax(unknown)) if unknown.any() else cand.size
        if hit[:first_unknown].any():
            return int(cand[int(np.argmax(hit[:first_unknown]))])
        if first_unknown < cand.size:
            bad = int(cand[first_unknown])
            raise InsufficientWindow(_need(win, bad, depth), win.length, f"{what}: prefix {bad} at depth {depth}")
        n = int(cand[-1]) + 2
    if limit is not None and limit <= win.length:
        raise NotFoundWithin(limit, what)
    raise InsufficientWindow(win.length + 1, win.length, f"{what}: scanned the whole window")


def find_shortest_k_regular_prefix(win: SequenceWindow, k: int, limit: Optional[int] = None) -> int:
    """Length of the shortest k-regular prefix of S.

    Only even lengths are scanned, odd ones are never 0-regular.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    return _scan_even_prefixes(
        win, k, lambda bits: ~bits[:, : k + 1].any(axis=1), limit, f"shortest {k}-regular prefix"
    )


def find_k_minimal_prefix(win: SequenceWindow, k: int, limit: Optional[int] = None) -> int:
    """Length of the shortest k-normal prefix (the k-minimal prefix)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return _scan_even_prefixes(
        win,
        k + 1,
        lambda bits: ~bits[:, : k + 1].any(axis=1) & (bits[:, k + 1] == 1),
        limit,
        f"{k}-minimal prefix",
    )


def regular_prefixes(win: SequenceWindow, k: int, limit: int) -> np.ndarray:
    """All k-regular prefix lengths up to ``limit``."""
    cand = np.arange(2, limit + 1, 2, dtype=np.int64)
    bits = history_matrix(win, np.zeros_like(cand), cand, k)
    if (bits < 0).any():
        bad = int(cand[np.flatnonzero((bits < 0).any(axis=1))[0]])
        raise InsufficientWindow(_need(win, bad, k), win.length, f"{k}-regular prefixes up to {limit}")
    return cand[~bits.any(axis=1)]


# ---------------------------------------------------------------------------
# closed forms for k <= 3
# ---------------------------------------------------------------------------

def closed_form_k_regular(win: SequenceWindow, n: int, k: int) -> bool:
    """Regularity of the prefix of length n from explicit digit counts.

    0: n even.  1: also the digit sum is even.  2: also the sum of the
    odd-indexed digits is even.  3: also the number of odd indices j with
    s_j = 2, plus the number of odd j with s_j = 1 and s_1 + ... + s_{j-1}
    even, is even.
    """
    if not 0 <= k <= 3:
        raise ValueError("closed forms exist for k = 0..3 only")
    if not 1 <= n <= win.length:
        raise OutOfWindow(f"prefix length {n} outside window of length {win.length}")
    if n % 2:
        return False
    d = win.digits[:n].astype(np.int64)
    if k >= 1 and int(d.sum()) % 2:
        return False
    odd_digits = d[0::2]
    if k >= 2 and int(odd_digits.sum()) % 2:
        return False
    if k >= 3:
        running = np.concatenate(([0], np.cumsum(d)[:-1]))[0::2]
        twos = int((odd_digits == 2).sum())
        ones_even = int(((odd_digits == 1) & (running % 2 == 0)).sum())
        if (twos + ones_even) % 2:
            return False
    return True
