"""Hot loops, in two flavours.

Each kernel has a pure-numpy implementation (``*_numpy``) and, when numba is
importable, a compiled one (``*_numba``).  The public names point at the
compiled variant unless ``KOLA_DISABLE_NUMBA`` is set to a non-empty value
other than ``0``.  Both variants must return identical arrays; the test suite
checks this directly.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "USING_NUMBA",
    "HAVE_NUMBA",
    "generate_digits",
    "level_maps",
    "generate_digits_numpy",
    "level_maps_numpy",
]


def _numba_disabled() -> bool:
    flag = os.environ.get("KOLA_DISABLE_NUMBA", "")
    return flag not in ("", "0")


try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional speedup
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# sequence generation
# ---------------------------------------------------------------------------

def generate_digits_numpy(n: int) -> np.ndarray:
    """First ``n`` digits of S as uint8 values in {1, 2}.

    Repeated run-length expansion of the current prefix: digit i of the
    prefix (1-based) emits a run of length s_i of the value 1 if i is odd,
    2 otherwise.  Each pass grows the prefix by a factor of about 3/2.
    """
    s = np.array([1, 2, 2], dtype=np.uint8)
    while s.size < n:
        values = np.ones(s.size, dtype=np.uint8)
        values[1::2] = 2
        s = np.repeat(values, s)
    return s[:n].copy()


def _generate_digits_loop(n):
    out = np.empty(max(n, 3), dtype=np.uint8)
    out[0] = 1
    out[1] = 2
    out[2] = 2
    write = 3
    read = 2  # 0-based index of the digit giving the next run length
    digit = 1
    while write < n:
        run = out[read]
        out[write] = digit
        write += 1
        if run == 2 and write < n:
            out[write] = digit
            write += 1
        digit = 3 - digit
        read += 1
    return out[:n].copy()


# ---------------------------------------------------------------------------
# iterated prefix-sum maps
# ---------------------------------------------------------------------------

def level_maps_numpy(prefix_sums: np.ndarray, points: np.ndarray, depth: int) -> np.ndarray:
    """Iterate ``x -> prefix_sums[x]`` on every point, ``depth`` times.

    Row h of the result holds the h-th iterate.  Entries whose predecessor
    lies beyond the table are -1 (and stay -1 at every deeper level).
    """
    limit = prefix_sums.size - 1
    out = np.full((depth + 1, points.size), -1, dtype=np.int64)
    cur = np.asarray(points, dtype=np.int64).copy()
    out[0] = cur
    for h in range(1, depth + 1):
        ok = (cur >= 0) & (cur <= limit)
        nxt = np.full_like(cur, -1)
        nxt[ok] = prefix_sums[cur[ok]]
        out[h] = nxt
        cur = nxt
    return out


def _level_maps_loop(prefix_sums, points, depth):
    limit = prefix_sums.size - 1
    m = points.size
    out = np.full((depth + 1, m), -1, dtype=np.int64)
    for j in range(m):
        out[0, j] = points[j]
    # row by row keeps the writes contiguous
    for h in range(1, depth + 1):
        for j in range(m):
            x = out[h - 1, j]
            if 0 <= x <= limit:
                out[h, j] = prefix_sums[x]
    return out


if HAVE_NUMBA:
    generate_digits_numba = njit(cache=True)(_generate_digits_loop)
    _level_maps_jit = njit(cache=True)(_level_maps_loop)

    def level_maps_numba(prefix_sums: np.ndarray, points: np.ndarray, depth: int) -> np.ndarray:
        return _level_maps_jit(
            np.ascontiguousarray(prefix_sums, dtype=np.int64),
            np.ascontiguousarray(points, dtype=np.int64),
            int(depth),
        )

    __all__ += ["generate_digits_numba", "level_maps_numba"]

USING_NUMBA = HAVE_NUMBA and not _numba_disabled()

if USING_NUMBA:
    generate_digits = generate_digits_numba
    level_maps = level_maps_numba
else:
    generate_digits = generate_digits_numpy
    level_maps = level_maps_numpy
