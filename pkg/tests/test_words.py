import numpy as np
import pytest

import oracles
from kolakoski import words as W
from kolakoski.errors import NotDifferentiable
from kolakoski.words import INFINITE, Word


def test_construction_and_roundtrip():
    w = Word("1221121")
    assert len(w) == 7
    assert str(w) == "1221121"
    assert list(w) == [1, 2, 2, 1, 1, 2, 1]
    assert Word([1, 2, 2]) == Word(np.array([1, 2, 2], dtype=np.uint8)) == "122"
    assert Word(w) == w
    assert Word.from_bits(w.bits, len(w)) == w


def test_rejects_other_digits():
    with pytest.raises(ValueError):
        Word("123")
    with pytest.raises(ValueError):
        Word([0, 1])
    with pytest.raises(ValueError):
        Word.from_bits(0b100, 2)


def test_indexing_and_slicing():
    w = Word("12211")
    assert w[0] == 1 and w[1] == 2 and w[-1] == 1
    assert w[1:4] == "221"
    with pytest.raises(IndexError):
        w[5]


def test_concat_hash_count():
    a, b = Word("12"), Word("211")
    assert a + b == "12211"
    assert W.EMPTY + a == a
    assert len({Word("12"), Word("12"), Word("21")}) == 2
    assert Word("12211").count(1) == 3 and Word("12211").count(2) == 2
    assert Word("12211").startswith(Word("122"))
    assert not Word("12").startswith(Word("122"))
    assert Word("1221121").find(Word("211")) == 2
    assert Word("") != Word("1")


@pytest.mark.parametrize("w, expected", [("122", "211"), ("", ""), ("2211", "1122")])
def test_mirror(w, expected):
    assert W.mirror(Word(w)) == expected


@pytest.mark.parametrize("w, expected", [("122", "221"), ("", ""), ("1221", "1221")])
def test_reverse(w, expected):
    assert W.reverse(Word(w)) == expected


def test_word_sum():
    assert W.word_sum(Word("1221")) == 6
    assert W.word_sum(W.EMPTY) == 0
    assert W.word_sum(Word("1221121221221121")) == 24


def test_integrate_examples():
    assert W.integrate(Word("12")) == "122"
    assert W.integrate(Word("1221121221")) == "122112122122112"
    assert W.integrate(Word("21"), mirrored=True) == "221"
    assert W.integrate_n(Word("12"), 2) == "12211"
    assert W.integrate_n(Word("12"), 0) == "12"
    assert W.integrate_n(Word("12"), 3) == "1221121"
    with pytest.raises(ValueError):
        W.integrate_n(Word("12"), -1)


def test_integrate_matches_oracle():
    rng = np.random.default_rng(3)
    for _ in range(200):
        d = rng.integers(1, 3, size=rng.integers(0, 40)).tolist()
        for mirrored in (False, True):
            assert str(W.integrate(Word(d), mirrored)) == oracles.as_str(oracles.integrate(d, mirrored))


@pytest.mark.parametrize(
    "w, expected",
    [("1", ""), ("12", ""), ("21", ""), ("2", ""), ("1221121221", "22112"), ("12211211", "2212")],
)
def test_derivative_examples(w, expected):
    assert W.derivative(Word(w)) == expected


def test_derivative_not_differentiable():
    with pytest.raises(NotDifferentiable):
        W.derivative(Word("111"))
    with pytest.raises(NotDifferentiable):
        W.derivative(Word("1222"))
    # a triple at the edge is still a triple after trimming one digit
    with pytest.raises(NotDifferentiable):
        W.derivative(Word("2111"))


def test_derivative_matches_oracle():
    rng = np.random.default_rng(4)
    for _ in range(500):
        d = rng.integers(1, 3, size=rng.integers(0, 30)).tolist()
        t = oracles.trim(d)
        r = oracles.runs(t)
        if r and max(r) > 2:
            with pytest.raises(NotDifferentiable):
                W.derivative(Word(d))
        else:
            assert str(W.derivative(Word(d))) == oracles.as_str(r)


@pytest.mark.parametrize(
    "w, order", [("111", 0), ("1221121221", INFINITE), ("12211211", INFINITE), ("", INFINITE), ("21212", 1)]
)
def test_smoothness_order(w, order):
    assert W.smoothness_order(Word(w)) == order


def test_derivative_chain():
    assert [str(x) for x in W.derivative_chain(Word("1221121221"))] == ["22112", "22", "2", ""]
    assert W.derivative_chain(Word("111")) == []


def test_run_lengths_and_trim():
    assert W.run_lengths(np.array([1, 1, 2, 1, 1, 1], dtype=np.uint8)).tolist() == [2, 1, 3]
    assert W.run_lengths(np.zeros(0, dtype=np.uint8)).tolist() == []
    assert W.trim(Word("1221121221")) == "22112122"
    assert W.trim(Word("2211")) == "2211"
