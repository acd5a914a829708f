"""Blocks generated by a prefix and their length / frequency tables.

For a prefix w of length n, the k-th block b_k is the subrow
(L_{k-1}(n) + 1, L_k(n)), so that w^{-(k-1)} b_k = w^{-k} and
S = w b_1 b_2 ...  Every quantity is an exact integer or Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .engine import SequenceWindow
from .errors import InsufficientWindow
from .subrows import SubrowRef
from .words import Word


@dataclass(frozen=True)
class BlockSeries:
    generator_prefix_length: int
    blocks: tuple[SubrowRef, ...]
    ones: tuple[int, ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def twos(self) -> tuple[int, ...]:
        return tuple(len(b) - o for b, o in zip(self.blocks, self.ones))

    def __len__(self) -> int:
        return len(self.blocks)


def blocks(win: SequenceWindow, prefix_length: int, count: int) -> BlockSeries:
    if prefix_length < 2:
        raise ValueError("blocks need a generating prefix of length >= 2")
    if count < 1:
        raise ValueError("block count must be positive")
    bounds = [prefix_length]
    for k in range(count):
        x = bounds[-1]
        if x > win.length:
            raise InsufficientWindow(int(x * 1.5 ** (count - k)), win.length, f"block {k + 1} of prefix {prefix_length}")
        bounds.append(int(win.prefix_sums[x]))
    if bounds[-1] > win.length:
        raise InsufficientWindow(bounds[-1], win.length, f"block {count} of prefix {prefix_length}")
    refs = tuple(SubrowRef(a + 1, b) for a, b in zip(bounds, bounds[1:]))
    ones = tuple(win.ones(r.start, r.end) for r in refs)
    return BlockSeries(prefix_length, refs, ones)


def prefix_length_of(win: SequenceWindow, word) -> int:
    """Length of ``word`` after checking that it is a prefix of S."""
    w = Word(word)
    if len(w) > win.length:
        raise InsufficientWindow(len(w), win.length, "generator prefix")
    if win.prefix(len(w)) != w:
        raise ValueError(f"{w} is not a prefix of the Kolakoski sequence")
    return len(w)


@dataclass(frozen=True)
class BlockRow:
    k: int
    start: int
    end: int
    length: int
    ratio: Optional[Fraction]  # |b_k| / |b_{k-1}|
    ones: int
    twos: int
    ones_frequency: Fraction  # f_{b_k}(1)
    prev_prefix_length: int  # |u_{k-1}|
    prev_prefix_twos: int  # number of 2s in u_{k-1}

    def growth_identity(self) -> tuple[Fraction, Fraction]:
        """|u_k| / |u_{k-1}| next to f + 2(1 - f), f the 1-frequency of u_{k-1}."""
        u_prev = self.prev_prefix_length
        f = Fraction(u_prev - self.prev_prefix_twos, u_prev)
        return Fraction(u_prev + self.length, u_prev), f + 2 * (1 - f)

    def block_share_identity(self) -> tuple[Fraction, Fraction]:
        """|b_k| / |u_{k-1}| next to 1 - f."""
        u_prev = self.prev_prefix_length
        f = Fraction(u_prev - self.prev_prefix_twos, u_prev)
        return Fraction(self.length, u_prev), 1 - f


def block_report(win: SequenceWindow, series: BlockSeries) -> list[BlockRow]:
    if not len(series):
        raise ValueError("empty block series")
    rows = []
    prev_len = None
    for k, (ref, ones) in enumerate(zip(series.blocks, series.ones), start=1):
        length = len(ref)
        u_prev = ref.start - 1
        rows.append(
            BlockRow(
                k=k,
                start=ref.start,
                end=ref.end,
                length=length,
                ratio=None if prev_len is None else Fraction(length, prev_len),
                ones=ones,
                twos=length - ones,
                ones_frequency=Fraction(ones, length),
                prev_prefix_length=u_prev,
                prev_prefix_twos=u_prev - win.ones(1, u_prev),
            )
        )
        prev_len = length
    return rows


CSV_COLUMNS = ("k", "start", "end", "len", "ratio_num", "ratio_den", "ones", "twos")


def csv_rows(rows: list[BlockRow]) -> list[tuple]:
    out = []
    for r in rows:
        num, den = ("", "") if r.ratio is None else (r.ratio.numerator, r.ratio.denominator)
        out.append((r.k, r.start, r.end, r.length, num, den, r.ones, r.twos))
    return out
