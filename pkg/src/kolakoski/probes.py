"""Constructive procedures on S and report-only probes.

Assertion-grade checks (reversal structure, recurrence/mirroring prefixes,
coincidence of the recurrent words) raise on failure.  The density, infinite
regularity and collision probes only report what they see; every report is
a plain dict with the keys ``probe, params, window_length, rows, warnings``
in that order.
"""

from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .blocks import blocks
from .engine import SequenceWindow
from .errors import EqualityViolation, InsufficientWindow, StructureViolation
from .regularity import (
    ParityHistory,
    RegularityReport,
    find_k_minimal_prefix,
    history_matrix,
    prefix_orders,
)
from .subrows import SubrowRef, materialize, s_integral_n
from .words import Word


def report(probe: str, params: dict, win: SequenceWindow, rows: list, warnings: list) -> dict:
    return {
        "probe": probe,
        "params": params,
        "window_length": win.length,
        "rows": rows,
        "warnings": warnings,
    }


class UnresolvedTail(UserWarning):
    """A decomposition could not pair its last normal group inside the window."""


# ---------------------------------------------------------------------------
# covering by k-regular subrows
# ---------------------------------------------------------------------------

def certified_limit(win: SequenceWindow, depth: int) -> int:
    """Largest end position whose depth-``depth`` history is computable."""
    e = win.length
    for _ in range(max(depth - 1, 0)):
        e = int(np.searchsorted(win.prefix_sums, e, side="right")) - 1
    return e


@dataclass
class Decomposition:
    start_offset: int
    level: int
    head: Optional[SubrowRef]
    cuts: np.ndarray  # group i (0-based) is (cuts[i] + 1, cuts[i + 1])
    certificates: np.ndarray  # parity bits 0..level for each group
    limit: int
    tail: Optional[SubrowRef] = None
    warnings: list = field(default_factory=list)

    def __len__(self) -> int:
        return self.cuts.size - 1

    @property
    def groups(self) -> list[SubrowRef]:
        return [SubrowRef(int(a) + 1, int(b)) for a, b in zip(self.cuts[:-1], self.cuts[1:])]

    def group(self, i: int) -> SubrowRef:
        return SubrowRef(int(self.cuts[i]) + 1, int(self.cuts[i + 1]))

    def certificate(self, i: int) -> RegularityReport:
        hist = ParityHistory(tuple(int(b) for b in self.certificates[i]))
        return RegularityReport(self.group(i), hist, hist.order())

    def group_lengths(self) -> np.ndarray:
        return np.diff(self.cuts)

    def summary(self) -> dict:
        lengths = self.group_lengths()
        return {
            "level": self.level,
            "start_offset": self.start_offset,
            "head": None if self.head is None else [self.head.start, self.head.end],
            "groups": int(lengths.size),
            "covered_until": int(self.cuts[-1]),
            "limit": self.limit,
            "tail": None if self.tail is None else [self.tail.start, self.tail.end],
            "min_group_length": int(lengths.min()) if lengths.size else None,
            "max_group_length": int(lengths.max()) if lengths.size else None,
            "mean_group_length": round(float(lengths.mean()), 3) if lengths.size else None,
        }


def cover_decompose(
    win: SequenceWindow, level: int, start_offset: int = 0, limit: Optional[int] = None
) -> Decomposition:
    """Write s_{offset+1} s_{offset+2} ... as a concatenation of level-regular subrows.

    Starts from consecutive pairs, which are 0-regular.  At each step j the
    groups are split into (j+1)-regular and j-normal ones; consecutive
    normals are paired and merged together with the regular groups between
    them, which makes the merged group (j+1)-regular.  An unpaired last
    normal, with everything after it, becomes the unresolved tail.  The
    head (the prefix left uncovered after the offset) stays empty: whether
    only finitely many normals occur cannot be decided in a finite window.
    """
    if level < 0 or start_offset < 0:
        raise ValueError("level and offset must be non-negative")
    cap = certified_limit(win, level)
    limit = cap if limit is None else min(limit, cap)
    npairs = (limit - start_offset) // 2
    if npairs < 1:
        raise InsufficientWindow(start_offset + 2, limit, f"decomposition at level {level}")
    cuts = start_offset + 2 * np.arange(npairs + 1, dtype=np.int64)
    tail_start = None
    notes = []
    for j in range(level):
        bits = history_matrix(win, cuts[:-1], cuts[1:], j + 1)[:, j + 1]
        normals = np.flatnonzero(bits == 1)
        if normals.size % 2:
            last = int(normals[-1])
            tail_start = int(cuts[last]) + 1
            cuts = cuts[: last + 1]
            normals = normals[:-1]
            notes.append(f"level {j + 1}: unpaired normal group from position {tail_start}")
        if normals.size:
            drop = np.zeros(cuts.size, dtype=bool)
            for p, q in zip(normals[0::2], normals[1::2]):
                drop[p + 1 : q + 1] = True
            cuts = cuts[~drop]
        if cuts.size < 2:
            raise InsufficientWindow(int(limit * 2), win.length, f"no groups survive at level {j + 1}")
    certificates = history_matrix(win, cuts[:-1], cuts[1:], level)
    tail = None
    if tail_start is not None:
        tail = SubrowRef(tail_start, max(int(limit), tail_start))
        _warnings.warn(UnresolvedTail(f"level {level}: unresolved tail {tail}"), stacklevel=2)
    dec = Decomposition(start_offset, level, None, cuts, certificates, limit, tail, notes)
    return dec


def verify_decomposition(win: SequenceWindow, dec: Decomposition, samples: int = 64, seed: int = 0) -> int:
    """Recompute every group's history from scratch; return the number of failures.

    All groups go through the batch path; a random sample is additionally
    recomputed one by one through :func:`regularity.parity_history`.
    """
    from .regularity import parity_history

    cuts = dec.cuts
    if np.any(np.diff(cuts) <= 0) or cuts[0] != dec.start_offset:
        return len(dec)
    bits = history_matrix(win, cuts[:-1], cuts[1:], dec.level)
    failures = int((bits != 0).any(axis=1).sum())
    rng = np.random.default_rng(seed)
    for i in rng.choice(len(dec), size=min(samples, len(dec)), replace=False):
        if not parity_history(win, dec.group(int(i)), dec.level).is_regular(dec.level):
            failures += 1
    return failures


# ---------------------------------------------------------------------------
# recurrent words
# ---------------------------------------------------------------------------

@dataclass
class RecurrentFamily:
    level: int
    occurrences: list[tuple[SubrowRef, Word]]
    base: Decomposition

    @property
    def word(self) -> Word:
        return self.occurrences[0][1]


def recurrent_words(
    win: SequenceWindow,
    level: int,
    occurrences: int,
    start_offset: int = 0,
    decomposition: Optional[Decomposition] = None,
) -> RecurrentFamily:
    """Equal occurrence words attached to the first groups of a decomposition.

    For the group starting after position c, the doubly S-integrated group
    begins with the subrow z = (L_2(c) + 1, L_2(c) + 2) = "12"; integrating z
    another level - 2 times gives an occurrence starting at L_level(c) + 1.
    All of these coincide as words because every prefix ending at a group
    boundary has the same parity history up to ``level``.
    """
    if level < 2:
        raise ValueError("recurrent words need level >= 2")
    dec = decomposition or cover_decompose(win, level, start_offset)
    if len(dec) < occurrences:
        raise InsufficientWindow(
            int(dec.cuts[-1] * occurrences / max(len(dec), 1)), win.length, f"{occurrences} groups at level {level}"
        )
    out = []
    for c in dec.cuts[:occurrences]:
        c2 = win.iterate(int(c), 2)
        z = SubrowRef(c2 + 1, c2 + 2)
        if z.end > win.length:
            raise InsufficientWindow(z.end, win.length, "recurrent word seed")
        zw = materialize(win, z)
        if zw != Word("12"):
            raise EqualityViolation(f"seed {z} reads {zw}, expected 12")
        try:
            occ = s_integral_n(win, z, level - 2)
            if occ.end > win.length:
                raise InsufficientWindow(occ.end, win.length, "recurrent word")
        except IndexError as exc:
            raise InsufficientWindow(int(win.length * 1.8), win.length, str(exc)) from exc
        out.append((occ, materialize(win, occ)))
    first = out[0][1]
    for ref, w in out[1:]:
        if w != first:
            raise EqualityViolation(f"occurrence {ref} reads {w}, first occurrence reads {first}")
    return RecurrentFamily(level, out, dec)


# ---------------------------------------------------------------------------
# prefix identities
# ---------------------------------------------------------------------------

def _levels(win: SequenceWindow, x: int, depth: int) -> list[int]:
    out = [x]
    for _ in range(depth):
        if out[-1] > win.length:
            raise InsufficientWindow(int(out[-1] * 1.5), win.length, f"prefix-sum map of {x}")
        out.append(int(win.prefix_sums[out[-1]]))
    return out


def _segment_equals(win: SequenceWindow, start: int, ref: np.ndarray) -> bool:
    """Whether s_{start+1} .. s_{start+len(ref)} equals ``ref``."""
    if start + ref.size > win.length:
        raise InsufficientWindow(start + ref.size, win.length, "prefix identity")
    return bool(np.array_equal(win.digits[start : start + ref.size], ref))


def recurrence_prefix_ok(win: SequenceWindow, n: int, k: int) -> bool:
    """For a k-regular prefix w (k >= 2): is w^{-k} (12)^{-(k-2)} a prefix of S?"""
    a = _levels(win, n, k)[-1]
    b = _levels(win, 2, k - 2)[-1]
    return _segment_equals(win, a, win.digits[:b])


def mirroring_prefix_ok(win: SequenceWindow, n: int, k: int) -> bool:
    """For a k-normal prefix w: is w^{-(k+2)} followed by the mirror of (12)^{-k}?"""
    a = _levels(win, n, k + 2)[-1]
    b = _levels(win, 2, k)[-1]
    return _segment_equals(win, a, 3 - win.digits[:b])


@dataclass(frozen=True)
class ReversalRow:
    h: int
    guaranteed: bool
    reversed_tail: bool
    length_identity: bool

    @property
    def passed(self) -> bool:
        return self.reversed_tail and self.length_identity


def reversal_structure_check(win: SequenceWindow, n: int, max_depth: int, strict: bool = True) -> list[ReversalRow]:
    """Check the reversed-(12) structure after v^{-h}, where v 2 = w^{-2}.

    For the prefix w of length n, the prefix of length |v^{-h}| is followed
    by the reverse of (12)^{-h}, and |v^{-h}| + |(12)^{-h}| = |(v2)^{-h}| + 1
    with the digit after (v2)^{-h} equal to 1.  The identity is proved for
    h <= k - 1 when w is k-normal (or k-regular beyond the checked depth);
    failures at those depths raise :class:`StructureViolation` when
    ``strict``.  Deeper rows are reported but never raise.
    """
    order = prefix_orders(win, np.array([n]), max_depth + 1)[0]
    k = int(order)
    if k < 2:
        raise ValueError(f"prefix {n} is not 2-regular")
    l2 = _levels(win, n, 2)[-1]
    if win.element(l2) != 2:
        raise StructureViolation(f"w^-2 of prefix {n} ends with 1")
    v = l2 - 1
    vl = _levels(win, v, max_depth)
    tl = _levels(win, 2, max_depth)
    wl = _levels(win, n, max_depth + 2)
    rows = []
    for h in range(1, max_depth + 1):
        rev = win.digits[: tl[h]][::-1]
        tail_ok = _segment_equals(win, vl[h], rev)
        end = wl[h + 2]
        if end + 1 > win.length:
            raise InsufficientWindow(end + 1, win.length, "reversal structure")
        ident = vl[h] + tl[h] == end + 1 and win.element(end + 1) == 1
        row = ReversalRow(h, h <= k - 1, tail_ok, ident)
        if strict and row.guaranteed and not row.passed:
            raise StructureViolation(f"prefix {n} ({k}-regular) fails the reversal structure at depth {h}")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# report-only probes
# ---------------------------------------------------------------------------

def _frac(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def density_probe(
    win: SequenceWindow, minimal_ks: list[int], block_count: int, chunk: int, search_limit: Optional[int] = None
) -> dict:
    """|f_b(1) - f_c(1)| for blocks b of k-minimal prefixes, c the first ``chunk`` digits of b."""
    rows, notes = [], []
    for k in minimal_ks:
        n = find_k_minimal_prefix(win, k, search_limit)
        series = blocks(win, n, block_count)
        for m, (ref, ones) in enumerate(zip(series.blocks, series.ones), start=1):
            if len(ref) <= chunk:
                continue
            fb = Fraction(ones, len(ref))
            fc = Fraction(win.ones(ref.start, ref.start + chunk - 1), chunk)
            diff = abs(fb - fc)
            rows.append(
                {
                    "k": k,
                    "prefix_length": n,
                    "block": m,
                    "block_length": len(ref),
                    "f_block": _frac(fb),
                    "f_chunk": _frac(fc),
                    "difference": _frac(diff),
                    "difference_decimal": f"{float(diff):.12f}",
                }
            )
    if not rows:
        notes.append(f"no block longer than the chunk length {chunk}; nothing to compare")
    params = {"minimal_k": list(minimal_ks), "blocks": block_count, "chunk": chunk}
    return report("density", params, win, rows, notes)


def infty_probe(win: SequenceWindow, max_length: int, cap: int) -> dict:
    """Largest normality order among the prefixes of length <= max_length."""
    lengths = np.arange(1, max_length + 1, dtype=np.int64)
    orders = prefix_orders(win, lengths, cap)
    rows = []
    for k in range(0, cap + 1):
        hit = np.flatnonzero(orders == k)
        if hit.size:
            rows.append({"order": k, "count": int(hit.size), "first_length": int(lengths[hit[0]])})
    survivors = lengths[orders > cap]
    finite = orders[(orders >= 0) & (orders <= cap)]
    notes = []
    best = int(finite.max()) if finite.size else None
    at_best = int(lengths[np.flatnonzero(orders == best)[0]]) if best is not None else None
    if survivors.size:
        notes.append(f"{survivors.size} prefixes are still regular at depth {cap + 1}; order not determined")
    params = {"max_length": max_length, "cap": cap}
    out = report("infty", params, win, rows, notes)
    out["max_order"] = best
    out["max_order_length"] = at_best
    out["at_least"] = {"order": cap + 1, "lengths": survivors.tolist()}
    return out


def collision_probe(
    win: SequenceWindow, limit: int, max_length: int, depth: int, max_rows: int = 50
) -> dict:
    """Subrows ending by ``limit`` that share a depth-``depth`` parity history but not a word."""
    ends, starts = [], []
    for length in range(1, max_length + 1):
        e = np.arange(length, limit + 1, dtype=np.int64)
        ends.append(e)
        starts.append(e - length + 1)
    ends = np.concatenate(ends)
    starts = np.concatenate(starts)
    bits = history_matrix(win, starts - 1, ends, depth)
    if (bits < 0).any():
        bad = int(ends[np.flatnonzero((bits < 0).any(axis=1))[0]])
        raise InsufficientWindow(int(win.length * 1.5), win.length, f"depth {depth} histories at end {bad}")
    keys = np.packbits(bits.astype(np.uint8), axis=1, bitorder="little")
    order = np.lexsort(keys.T[::-1])
    keys, starts, ends = keys[order], starts[order], ends[order]
    split = np.flatnonzero((keys[1:] != keys[:-1]).any(axis=1)) + 1
    rows, colliding = [], 0
    for grp in np.split(np.arange(keys.shape[0]), split):
        words = {}
        for i in grp:
            w = str(win.word(int(starts[i]), int(ends[i])))
            words.setdefault(w, (int(starts[i]), int(ends[i])))
        if len(words) > 1:
            colliding += 1
            if len(rows) < max_rows:
                ordered = sorted(words.items(), key=lambda kv: kv[1])
                rows.append(
                    {
                        "history": [int(b) for b in bits[order[grp[0]]]],
                        "distinct_words": len(words),
                        "examples": [{"subrow": list(pos), "word": w} for w, pos in ordered[:4]],
                    }
                )
    notes = []
    if depth < 8:
        notes.append(f"depth {depth} is small; collisions are expected by counting alone")
    params = {"limit": limit, "max_length": max_length, "depth": depth}
    out = report("collisions", params, win, rows, notes)
    out["subrows"] = int(keys.shape[0])
    out["histories"] = int(split.size + 1)
    out["colliding_histories"] = colliding
    return out
