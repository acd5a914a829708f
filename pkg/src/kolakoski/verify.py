"""Verification suites: every invariant that can be checked at desk scale.

Each check returns a :class:`CheckResult` counting how many instances were
examined and how many failed.  The CLI ``verify`` command and the acceptance
tests both run these.
"""

from __future__ import annotations

import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from . import engine, probes, regularity, subrows, words
from .blocks import block_report, blocks
from .subrows import SubrowRef

PREFIX_16 = "1221121221221121"
SEED = 20240501


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: int = 0
    seconds: float = 0.0
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checked > 0

    def fail(self, detail) -> None:
        self.failures += 1
        if len(self.details) < 5:
            self.details.append(str(detail))

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.name}: checked={self.checked} failures={self.failures} time={self.seconds:.2f}s"
        if self.details:
            out += " first=" + "; ".join(self.details[:2])
        return out


@lru_cache(maxsize=4)
def window(n: int) -> engine.SequenceWindow:
    return engine.generate(n)


def _timed(fn: Callable[[CheckResult], None], name: str) -> CheckResult:
    res = CheckResult(name)
    t = time.perf_counter()
    fn(res)
    res.seconds = time.perf_counter() - t
    return res


# ---------------------------------------------------------------------------
# sequence suite
# ---------------------------------------------------------------------------

def check_prefix_16() -> CheckResult:
    def run(res):
        win = window(10**4)
        res.checked += 2
        if str(win.prefix(16)) != PREFIX_16:
            res.fail(f"prefix is {win.prefix(16)}")
        if not regularity.parity_history(win, SubrowRef(1, 16), 2).is_regular(2):
            res.fail("prefix of length 16 is not 2-regular")
    return _timed(run, "prefix-16")


def check_fixed_point(max_n: int = 10**4) -> CheckResult:
    """integrate(s_1..s_n) is the prefix of length prefix_sum(n), for every n."""
    def run(res):
        win = window(10**6)
        full = win.prefix(int(win.prefix_sums[max_n]))
        for n in range(1, max_n + 1):
            img = words.integrate(win.prefix(n))
            res.checked += 1
            if len(img) != win.prefix_sums[n] or not full.startswith(img):
                res.fail(f"n={n}")
    return _timed(run, "fixed-point")


def check_iterated_12(bound: int = 10**6) -> CheckResult:
    def run(res):
        win = window(bound)
        w = words.Word("12")
        while len(w) <= bound:
            res.checked += 1
            if win.prefix(len(w)) != w:
                res.fail(f"(12) integrated to length {len(w)}")
            w = words.integrate(w)
    return _timed(run, "iterated-12")


def check_run_boundaries(n: int = 10**6) -> CheckResult:
    def run(res):
        win = window(n)
        d = win.digits
        ends = np.flatnonzero(d[:-1] != d[1:]) + 1
        ps = win.prefix_sums
        image = ps[1:][(ps[1:] >= 1) & (ps[1:] <= n - 1)]
        res.checked += int(ends.size)
        if not np.array_equal(ends, image):
            res.fail("run boundaries differ from the prefix-sum image")
        triple = (d[:-2] == d[1:-1]) & (d[1:-1] == d[2:])
        res.checked += 1
        if triple.any():
            res.fail(f"triple run at {int(np.flatnonzero(triple)[0]) + 1}")
    return _timed(run, "run-boundaries")


def check_c_infinity(samples: int = 500, max_len: int = 200) -> CheckResult:
    def run(res):
        win = window(10**6)
        rng = np.random.default_rng(SEED)
        for _ in range(samples):
            length = int(rng.integers(1, max_len + 1))
            a = int(rng.integers(1, win.length - length + 2))
            w = win.word(a, a + length - 1)
            res.checked += 1
            if words.smoothness_order(w) != words.INFINITE:
                res.fail(f"({a},{a + length - 1})")
    return _timed(run, "c-infinity")


def check_density(n: int = 10**7, tol: float = 0.001) -> CheckResult:
    def run(res):
        t = time.perf_counter()
        win = engine.generate(n)
        f = win.ones(1, n) / n
        res.checked += 1
        res.details.append(f"f(1)={f:.6f} generated in {time.perf_counter() - t:.2f}s")
        if abs(f - 0.5) > tol:
            res.fail(f"frequency {f}")
    return _timed(run, "density")


def check_cache_roundtrip(n: int = 10**7) -> CheckResult:
    def run(res):
        win = engine.generate(n)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "window.kola")
            engine.save_cache(win, path)
            back = engine.load_cache(path)
        res.checked += 1
        if back != win or not np.array_equal(back.prefix_sums, win.prefix_sums):
            res.fail("loaded window differs")
    return _timed(run, "cache-roundtrip")


# ---------------------------------------------------------------------------
# lemma suite
# ---------------------------------------------------------------------------

def check_length_estimates(samples: int = 1000, max_len: int = 2000) -> CheckResult:
    def run(res):
        win = window(10**6)
        rng = np.random.default_rng(SEED + 1)
        for _ in range(samples):
            length = int(rng.integers(3, max_len + 1))
            a = int(rng.integers(1, 10**5))
            r = SubrowRef(a, a + length - 1)
            res.checked += 1
            big = len(subrows.s_integral(win, r))
            if not (6 * length <= 5 * big <= 9 * length):
                res.fail(f"integral of {r}: {big}")
            if subrows.has_s_derivative(win, r):
                small = len(subrows.s_derivative(win, r))
                if not (5 * length <= 9 * small and 6 * small <= 5 * length):
                    res.fail(f"S-derivative of {r}: {small}")
            d = len(words.derivative(subrows.materialize(win, r)))
            if not (length <= 4 * d and 6 * d <= 5 * length):
                res.fail(f"derivative of {r}: {d}")
    return _timed(run, "length-estimates")


def check_inverse_pairs(max_end: int = 10**4) -> CheckResult:
    """s_integral(s_derivative(r)) = r over every subrow with end <= max_end."""
    def run(res):
        win = window(10**6)
        ps = win.prefix_sums
        for b in range(1, max_end + 1):
            a = np.arange(1, b + 1, dtype=np.int64)
            mask, h, j = subrows.s_derivative_many(win, a, np.full_like(a, b))
            if not mask.any():
                continue
            res.checked += int(mask.sum())
            back_a = ps[h[mask] - 1] + 1
            back_b = ps[j[mask]]
            bad = (back_a != a[mask]) | (back_b != b) | (h[mask] > a[mask]) | (j[mask] > b)
            for i in np.flatnonzero(bad)[:5]:
                res.fail(f"({int(a[mask][i])},{b})")
            res.failures += max(int(bad.sum()) - 5, 0)
        # the scalar path must agree with the batch path
        rng = np.random.default_rng(SEED + 2)
        for _ in range(500):
            b = int(rng.integers(2, max_end + 1))
            a = int(rng.integers(1, b + 1))
            r = SubrowRef(a, b)
            mask, h, j = subrows.s_derivative_many(win, np.array([a]), np.array([b]))
            res.checked += 1
            if bool(mask[0]) != subrows.has_s_derivative(win, r):
                res.fail(f"batch/scalar disagree on {r}")
            elif mask[0]:
                d = subrows.s_derivative(win, r)
                if (d.start, d.end) != (int(h[0]), int(j[0])) or subrows.s_integral(win, d) != r:
                    res.fail(f"scalar round trip of {r}")
    return _timed(run, "inverse-pairs")


def check_mirror_dichotomy(max_end: int = 10**4, literal_end: int = 120, samples: int = 2000) -> CheckResult:
    """Word of the S-integral = integral of the word, mirrored iff start - 1 is odd.

    Digit i of S integrates to s_{ps[i-1]+1} .. s_{ps[i]}, all equal to 1 for
    odd i and 2 for even i; a subrow's S-integral is the concatenation of
    those runs, which is the dichotomy.  The per-position statement is
    checked for every i <= max_end, the literal word statement for every
    subrow ending by ``literal_end`` and for random longer ones.
    """
    def run(res):
        win = window(10**6)
        d = win.digits
        ps = win.prefix_sums
        i = np.arange(1, max_end + 1)
        expected = np.where(i % 2 == 1, 1, 2)
        first = d[ps[i - 1]]
        last = d[ps[i] - 1]
        res.checked += int(i.size)
        bad = (first != expected) | (last != expected)
        if bad.any():
            res.fail(f"position {int(i[np.flatnonzero(bad)[0]])}")

        def literal(r):
            res.checked += 1
            img = subrows.materialize(win, subrows.s_integral(win, r))
            if img != words.integrate(subrows.materialize(win, r), subrows.integral_is_mirrored(r)):
                res.fail(str(r))

        for b in range(1, literal_end + 1):
            for a in range(1, b + 1):
                literal(SubrowRef(a, b))
        rng = np.random.default_rng(SEED + 3)
        for _ in range(samples):
            b = int(rng.integers(literal_end, max_end + 1))
            literal(SubrowRef(int(rng.integers(1, b + 1)), b))
    return _timed(run, "mirror-dichotomy")


def check_closed_forms(max_n: int = 10**4) -> CheckResult:
    def run(res):
        win = window(10**6)
        n = np.arange(1, max_n + 1)
        bits = regularity.history_matrix(win, np.zeros_like(n), n, 3)
        for idx, length in enumerate(n.tolist()):
            for k in range(4):
                res.checked += 1
                if regularity.closed_form_k_regular(win, length, k) != (not bits[idx, : k + 1].any()):
                    res.fail(f"n={length} k={k}")
    return _timed(run, "closed-forms")


def check_syntax(samples: int = 3000, depth: int = 6) -> CheckResult:
    """Adjacent k-regular subrows concatenate to a k-regular one; two k-normal to (k+1)-regular."""
    def run(res):
        win = window(10**6)
        rng = np.random.default_rng(SEED + 4)
        a = rng.integers(1, 10**4, size=samples)
        b = a + rng.integers(0, 400, size=samples)
        c = b + 1 + rng.integers(0, 400, size=samples)
        h1 = regularity.history_matrix(win, a - 1, b, depth)
        h2 = regularity.history_matrix(win, b, c, depth)
        h12 = regularity.history_matrix(win, a - 1, c, depth)
        res.checked += samples
        # the lengths add level by level, so parities add mod 2
        bad = np.flatnonzero(((h1 + h2) % 2 != h12).any(axis=1))
        for i in bad[:5]:
            res.fail(f"({a[i]},{b[i]}),({b[i] + 1},{c[i]})")
        for k in range(depth - 1):
            reg = ~h1[:, : k + 1].any(axis=1) & ~h2[:, : k + 1].any(axis=1)
            res.checked += int(reg.sum())
            if (h12[reg, : k + 1] != 0).any():
                res.fail(f"item 5 at k={k}")
            nor = reg & (h1[:, k + 1] == 1) & (h2[:, k + 1] == 1)
            res.checked += int(nor.sum())
            if (h12[nor, : k + 2] != 0).any():
                res.fail(f"item 6 at k={k}")
    return _timed(run, "syntax-items")


def check_derivative_containment(samples: int = 500) -> CheckResult:
    def run(res):
        win = window(10**6)
        rng = np.random.default_rng(SEED + 5)
        done = 0
        while done < samples:
            length = int(rng.integers(3, 300))
            a = int(rng.integers(2, 10**5))
            r = SubrowRef(a, a + length - 1)
            if not subrows.has_s_derivative(win, r):
                continue
            done += 1
            res.checked += 1
            dw = words.derivative(subrows.materialize(win, r))
            host = subrows.materialize(win, subrows.s_derivative(win, r))
            if host.find(dw) < 0 and len(dw):
                res.fail(str(r))
    return _timed(run, "derivative-containment")


# ---------------------------------------------------------------------------
# structure suite
# ---------------------------------------------------------------------------

def check_known_prefix_lengths() -> CheckResult:
    def run(res):
        win = window(10**6)
        res.checked += 2
        got = regularity.find_shortest_k_regular_prefix(win, 10)
        if got != 6410:
            res.fail(f"shortest 10-regular prefix {got}")
        got = regularity.find_k_minimal_prefix(win, 10)
        if got != 7144:
            res.fail(f"10-minimal prefix {got}")
    return _timed(run, "prefix-6410-7144")


def found_prefixes(win, max_k: int = 8) -> dict[int, list[int]]:
    """Shortest k-regular and k-minimal prefix lengths for k = 2..max_k."""
    out = {}
    for k in range(2, max_k + 1):
        found = {regularity.find_shortest_k_regular_prefix(win, k), regularity.find_k_minimal_prefix(win, k)}
        out[k] = sorted(found)
    return out


def check_reversal(max_k: int = 8, max_depth: int = 6) -> CheckResult:
    def run(res):
        win = window(10**6)
        for k, lengths in found_prefixes(win, max_k).items():
            for n in lengths:
                rows = probes.reversal_structure_check(win, n, max_depth, strict=False)
                for row in rows:
                    if row.h <= k - 1:
                        res.checked += 1
                        if not row.passed:
                            res.fail(f"n={n} k={k} h={row.h}")
    return _timed(run, "reversal-structure")


def check_prefix_identities(max_n: int = 10**4, max_k: int = 8) -> CheckResult:
    def run(res):
        win = window(10**6)
        n = np.arange(2, max_n + 1, 2)
        orders = regularity.prefix_orders(win, n, max_k + 1)
        for length, order in zip(n.tolist(), orders.tolist()):
            for k in range(2, min(order, max_k) + 1):
                res.checked += 1
                if not probes.recurrence_prefix_ok(win, length, k):
                    res.fail(f"recurrence n={length} k={k}")
            if 0 <= order <= max_k:
                res.checked += 1
                if not probes.mirroring_prefix_ok(win, length, order):
                    res.fail(f"mirroring n={length} k={order}")
    return _timed(run, "recurrence-mirroring")


def check_decompositions(max_k: int = 8, n: int = 10**6) -> CheckResult:
    def run(res):
        import warnings

        win = window(n)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", probes.UnresolvedTail)
            for k in range(max_k + 1):
                dec = probes.cover_decompose(win, k)
                res.checked += len(dec)
                f = probes.verify_decomposition(win, dec)
                if f:
                    res.failures += f
                    res.details.append(f"level {k}: {f} groups not {k}-regular")
    return _timed(run, "cover-decomposition")


def check_recurrent_words(max_k: int = 8, count: int = 10, n: int = 10**6) -> CheckResult:
    def run(res):
        import warnings

        win = window(n)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", probes.UnresolvedTail)
            for k in range(2, max_k + 1):
                fam0 = probes.recurrent_words(win, k, count, 0)
                fam4 = probes.recurrent_words(win, k, count, 4)
                res.checked += len(fam0.occurrences) + len(fam4.occurrences)
                if len(fam0.occurrences) < count:
                    res.fail(f"k={k}: only {len(fam0.occurrences)} occurrences")
                if fam0.word != words.integrate_n(words.Word("12"), k - 2):
                    res.fail(f"k={k}: offset-0 word is not (12) integrated {k - 2} times")
                if k >= 3:
                    res.checked += 1
                    if fam0.word == fam4.word:
                        res.fail(f"k={k}: offset 0 and offset 4 families coincide")
    return _timed(run, "recurrent-words")


def check_blocks(max_k: int = 25) -> CheckResult:
    """Block identities for the generators "12" and the length-16 prefix.

    The growth bounds come from the length estimate for subrows of length
    >= 3, so ratios are checked only after such a block and the geometric
    bounds are anchored at the first block of length >= 3.
    :func:`geometric_bound_violations` applies them literally from b_1.
    """
    def run(res):
        win = window(10**6)
        for n in (2, 16):
            rows = block_report(win, blocks(win, n, max_k))
            anchor = next(r for r in rows if r.length >= 3)
            for row in rows:
                res.checked += 1
                u_prev = win.prefix(row.start - 1)
                if row.length != u_prev.count(2):
                    res.fail(f"prefix {n}, k={row.k}: |b_k|={row.length}, twos={u_prev.count(2)}")
                if win.prefix(row.end) != u_prev + win.word(row.start, row.end):
                    res.fail(f"prefix {n}, k={row.k}: concatenation")
                if row.k >= 2 and rows[row.k - 2].length >= 3 and not (
                    Fraction(6, 5) <= row.ratio <= Fraction(9, 5)
                ):
                    res.fail(f"prefix {n}, k={row.k}: ratio {row.ratio}")
                if row.k >= anchor.k:
                    steps = row.k - anchor.k
                    lo = Fraction(6, 5) ** steps * anchor.length
                    hi = Fraction(9, 5) ** steps * anchor.length
                    if not lo <= row.length <= hi:
                        res.fail(f"prefix {n}, k={row.k}: length {row.length} outside [{lo}, {hi}]")
    return _timed(run, "block-identities")


def geometric_bound_violations(win, prefix_length: int, max_k: int = 25) -> list[int]:
    """Block indices k where (6/5)^(k-1)|b_1| <= |b_k| <= (9/5)^(k-1)|b_1| fails."""
    lengths = blocks(win, prefix_length, max_k).lengths
    b1 = lengths[0]
    return [
        k
        for k, length in enumerate(lengths, start=1)
        if not Fraction(6, 5) ** (k - 1) * b1 <= length <= Fraction(9, 5) ** (k - 1) * b1
    ]


SUITES: dict[str, list[Callable[[], CheckResult]]] = {
    "sequence": [
        check_prefix_16,
        check_fixed_point,
        check_iterated_12,
        check_run_boundaries,
        check_c_infinity,
        check_density,
        check_cache_roundtrip,
    ],
    "lemmas": [
        check_length_estimates,
        check_inverse_pairs,
        check_mirror_dichotomy,
        check_closed_forms,
        check_syntax,
        check_derivative_containment,
    ],
    "structure": [
        check_known_prefix_lengths,
        check_reversal,
        check_prefix_identities,
        check_decompositions,
        check_recurrent_words,
        check_blocks,
    ],
}


def run_suite(name: str) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    return [check() for suite in names for check in SUITES[suite]]
