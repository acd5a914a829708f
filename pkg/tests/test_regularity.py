import numpy as np
import pytest

import oracles
from kolakoski import regularity as R
from kolakoski.errors import InsufficientWindow, NotFoundWithin, OutOfWindow
from kolakoski.regularity import NOT_REGULAR, AtLeast, ParityHistory
from kolakoski.subrows import SubrowRef


def oracle_bits(ps, a, b, depth):
    lo, hi, bits = a - 1, b, []
    for _ in range(depth + 1):
        bits.append((hi - lo) % 2)
        lo, hi = ps[lo], ps[hi]
    return bits


def oracle_order(ps, n, cap):
    bits = oracle_bits(ps, 1, n, cap + 1)
    return bits.index(1) - 1 if 1 in bits else cap + 1


@pytest.mark.parametrize(
    "r, depth, bits", [((1, 16), 2, [0, 0, 0]), ((1, 10), 1, [0, 1]), ((1, 2), 1, [0, 1]), ((1, 16), 4, [0, 0, 0, 0, 1])]
)
def test_parity_history_examples(small, r, depth, bits):
    assert list(R.parity_history(small, SubrowRef(*r), depth).bits) == bits


def test_parity_history_matches_materialised_oracle(small, ref):
    rng = np.random.default_rng(7)
    for _ in range(60):
        a = int(rng.integers(1, 300))
        b = a + int(rng.integers(0, 40))
        assert list(R.parity_history(small, SubrowRef(a, b), 6).bits) == oracles.history(ref, a, b, 6)


def test_history_matrix_matches_prefix_sum_oracle(big, ref_ps):
    rng = np.random.default_rng(8)
    a = rng.integers(1, 5000, size=500)
    b = a + rng.integers(0, 200, size=500)
    bits = R.history_matrix(big, a - 1, b, 8)
    for i in range(500):
        assert bits[i].tolist() == oracle_bits(ref_ps, int(a[i]), int(b[i]), 8)


def test_history_matrix_marks_undecidable():
    from kolakoski import engine

    bits = R.history_matrix(engine.generate(100), [0], [90], 6)
    assert bits[0, 0] == 0 and (bits[0, -3:] == -1).all()
    with pytest.raises(InsufficientWindow):
        R.parity_history(engine.generate(100), SubrowRef(1, 90), 6)
    with pytest.raises(OutOfWindow):
        R.parity_history(engine.generate(100), SubrowRef(1, 101), 0)


def test_parity_history_object():
    h = ParityHistory((0, 0, 1, 0))
    assert h.depth == 3
    assert h.is_regular(1) and not h.is_regular(2)
    assert h.first_odd() == 2 and h.order() == 1
    assert ParityHistory((0, 0)).order() == AtLeast(1)
    assert ParityHistory((1,)).order() == NOT_REGULAR
    with pytest.raises(ValueError):
        h.is_regular(4)
    assert str(AtLeast(3)) == ">=3"


@pytest.mark.parametrize(
    "n, cap, order", [(16, 2, AtLeast(3)), (16, 3, 3), (10, 5, 0), (1, 5, NOT_REGULAR), (2, 3, 0)]
)
def test_normality_order(small, n, cap, order):
    assert R.normality_order(small, SubrowRef(1, n), cap) == order


def test_classify_report(small):
    rep = R.classify(small, SubrowRef(1, 16), 3)
    assert rep.as_dict() == {"subrow": [1, 16], "history": [0, 0, 0, 0], "normality_order": None, "at_least": 3}
    assert R.classify(small, SubrowRef(1, 10), 3).as_dict()["normality_order"] == 0


def test_prefix_orders_matches_oracle(big, ref_ps):
    lengths = np.arange(1, 3001)
    orders = R.prefix_orders(big, lengths, 6)
    assert orders.tolist() == [-1 if n % 2 else oracle_order(ref_ps, n, 6) for n in lengths.tolist()]


# searches: brute force over the pure-python prefix sums
def brute_shortest(ps, k):
    n = 2
    while any(oracle_bits(ps, 1, n, k)):
        n += 2
    return n


def brute_minimal(ps, k):
    n = 2
    while True:
        bits = oracle_bits(ps, 1, n, k + 1)
        if not any(bits[: k + 1]) and bits[k + 1]:
            return n
        n += 2


@pytest.mark.parametrize("k", range(0, 9))
def test_searches_match_brute_force(big, ref_ps, k):
    assert R.find_shortest_k_regular_prefix(big, k) == brute_shortest(ref_ps, k)
    assert R.find_k_minimal_prefix(big, k) == brute_minimal(ref_ps, k)


def test_search_known_values(big):
    assert R.find_shortest_k_regular_prefix(big, 0) == 2
    assert R.find_k_minimal_prefix(big, 0) == 2
    assert R.find_shortest_k_regular_prefix(big, 2) == 16
    assert R.find_shortest_k_regular_prefix(big, 10) == 6410
    assert R.find_k_minimal_prefix(big, 10) == 7144


def test_search_limits(big, small):
    with pytest.raises(NotFoundWithin):
        R.find_k_minimal_prefix(big, 10, limit=5000)
    from kolakoski import engine

    with pytest.raises(InsufficientWindow):
        R.find_k_minimal_prefix(engine.generate(3000), 10)
    with pytest.raises(ValueError):
        R.find_shortest_k_regular_prefix(small, -1)


def test_regular_prefixes(small, ref_ps):
    got = R.regular_prefixes(small, 3, 2000).tolist()
    assert got == [n for n in range(2, 2001, 2) if not any(oracle_bits(ref_ps, 1, n, 3))]
    assert got[0] == 16


@pytest.mark.parametrize("n, k, expected", [(16, 2, True), (10, 1, False), (2, 0, True), (9, 0, False)])
def test_closed_form_examples(small, n, k, expected):
    assert R.closed_form_k_regular(small, n, k) is expected


def test_closed_form_agrees_with_history(small):
    for k in range(4):
        for n in range(1, 3001):
            assert R.closed_form_k_regular(small, n, k) == (not any(R.parity_history(small, SubrowRef(1, n), k).bits))
    with pytest.raises(ValueError):
        R.closed_form_k_regular(small, 10, 4)
