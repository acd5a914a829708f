"""Calculus on finite words over the alphabet {1, 2}.

A :class:`Word` packs one bit per digit into a Python integer, first digit in
the least significant bit, bit 0 for the digit 1 and bit 1 for the digit 2.
This is the same layout the cache file uses.
"""

from __future__ import annotations

import math
from typing import Iterable, Union

import numpy as np

from .errors import NotDifferentiable

INFINITE = math.inf


def _bits_to_digits(bits: int, length: int) -> np.ndarray:
    if length == 0:
        return np.zeros(0, dtype=np.uint8)
    raw = np.frombuffer(bits.to_bytes((length + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, count=length, bitorder="little") + np.uint8(1)


def _digits_to_bits(digits: np.ndarray) -> int:
    if digits.size == 0:
        return 0
    packed = np.packbits(digits == 2, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


class Word:
    """Immutable finite word over {1, 2}.

    Indexing and slicing are 0-based like any Python sequence; the 1-based
    positions of the mathematical notation only appear in the window API.
    """

    __slots__ = ("_bits", "_length")

    def __init__(self, digits: Union[str, Iterable[int], np.ndarray, "Word"] = ""):
        if isinstance(digits, Word):
            self._bits, self._length = digits._bits, digits._length
            return
        if isinstance(digits, str):
            arr = np.frombuffer(digits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.asarray(list(digits) if not isinstance(digits, np.ndarray) else digits)
            arr = arr.astype(np.int64, copy=False).ravel()
        if arr.size and not np.all((arr == 1) | (arr == 2)):
            raise ValueError(f"words are over the digits 1 and 2, got {digits!r}")
        self._length = int(arr.size)
        self._bits = _digits_to_bits(np.asarray(arr))

    @classmethod
    def from_bits(cls, bits: int, length: int) -> "Word":
        if length < 0 or bits >> length:
            raise ValueError("bit pattern does not fit the stated length")
        w = cls.__new__(cls)
        w._bits, w._length = int(bits), int(length)
        return w

    @classmethod
    def from_array(cls, digits: np.ndarray) -> "Word":
        """Trusted fast path for uint8 arrays already known to hold 1s and 2s."""
        w = cls.__new__(cls)
        w._length = int(digits.size)
        w._bits = _digits_to_bits(digits)
        return w

    @property
    def bits(self) -> int:
        return self._bits

    def digits(self) -> np.ndarray:
        return _bits_to_digits(self._bits, self._length)

    def __len__(self) -> int:
        return self._length

    def __iter__(self):
        return iter(self.digits().tolist())

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word.from_array(self.digits()[item])
        i = item + self._length if item < 0 else item
        if not 0 <= i < self._length:
            raise IndexError("word index out of range")
        return 2 if (self._bits >> i) & 1 else 1

    def __add__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word.from_bits(self._bits | (other._bits << self._length), self._length + other._length)

    def __eq__(self, other) -> bool:
        if isinstance(other, str):
            other = Word(other)
        if not isinstance(other, Word):
            return NotImplemented
        return self._length == other._length and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self._length, self._bits))

    def __str__(self) -> str:
        return (self.digits() + ord("0")).tobytes().decode("ascii")

    def __repr__(self) -> str:
        return f"Word('{self}')"

    def count(self, digit: int) -> int:
        twos = self._bits.bit_count()
        if digit == 2:
            return twos
        if digit == 1:
            return self._length - twos
        return 0

    def startswith(self, prefix: "Word") -> bool:
        if len(prefix) > self._length:
            return False
        return self._bits & ((1 << len(prefix)) - 1) == prefix._bits

    def find(self, sub: "Word") -> int:
        """Lowest 0-based offset of ``sub`` in this word, or -1."""
        return str(self).find(str(sub))


EMPTY = Word("")


def mirror(w: Word) -> Word:
    """Swap 1 and 2 digit-wise."""
    return Word.from_bits(w.bits ^ ((1 << len(w)) - 1), len(w))


def reverse(w: Word) -> Word:
    return Word.from_array(w.digits()[::-1])


def word_sum(w: Word) -> int:
    return len(w) + w.count(2)


def integrate(w: Word, mirrored: bool = False) -> Word:
    """Alternating substitution: odd positions 1->1, 2->11; even 1->2, 2->22.

    With ``mirrored`` the digits of the image are swapped, which is what a
    subrow of S preceded by an odd-length prefix integrates to.
    """
    d = w.digits()
    values = np.full(d.size, 2 if mirrored else 1, dtype=np.uint8)
    values[1::2] = 1 if mirrored else 2
    return Word.from_array(np.repeat(values, d))


def integrate_n(w: Word, n: int) -> Word:
    if n < 0:
        raise ValueError("number of integrations must be non-negative")
    for _ in range(n):
        w = integrate(w)
    return w


def trim(w: Word) -> Word:
    """Drop a leading digit that differs from its neighbour, same for the trailing one."""
    n = len(w)
    if n <= 1:
        return EMPTY
    d = w.digits()
    lo = 1 if d[0] != d[1] else 0
    hi = n - 1 if d[-1] != d[-2] else n
    if hi <= lo:
        return EMPTY
    return Word.from_array(d[lo:hi])


def run_lengths(digits: np.ndarray) -> np.ndarray:
    if digits.size == 0:
        return np.zeros(0, dtype=np.int64)
    edges = np.flatnonzero(np.diff(digits)) + 1
    bounds = np.concatenate(([0], edges, [digits.size]))
    return np.diff(bounds)


def derivative(w: Word) -> Word:
    """Run-length encoding of the trimmed word.

    Raises :class:`NotDifferentiable` when a run longer than 2 survives the
    trimming.
    """
    t = trim(w)
    runs = run_lengths(t.digits())
    if runs.size and runs.max() > 2:
        raise NotDifferentiable(f"{w} has a run of length {int(runs.max())}")
    return Word.from_array(runs.astype(np.uint8))


def smoothness_order(w: Word) -> Union[int, float]:
    """Number of derivatives that exist before the chain fails.

    Returns :data:`INFINITE` when the chain reaches the empty word, which
    always happens for words in C-infinity since each derivative is shorter.
    """
    k = 0
    while len(w):
        try:
            w = derivative(w)
        except NotDifferentiable:
            return k
        k += 1
    return INFINITE


def derivative_chain(w: Word) -> list[Word]:
    """All derivatives of ``w`` until the empty word or the first failure."""
    chain = []
    while len(w):
        try:
            w = derivative(w)
        except NotDifferentiable:
            break
        chain.append(w)
    return chain
