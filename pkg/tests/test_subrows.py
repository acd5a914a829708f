import numpy as np
import pytest

import oracles
from kolakoski import subrows as S
from kolakoski.errors import NoSDerivative, OutOfWindow
from kolakoski.subrows import SubrowRef
from kolakoski.words import integrate


def test_subrowref_basics():
    r = SubrowRef(3, 4)
    assert len(r) == 2 and r.before == 2 and str(r) == "(3,4)"
    assert SubrowRef(1, 2) < SubrowRef(1, 3) < SubrowRef(2, 2)
    for bad in [(0, 1), (3, 2)]:
        with pytest.raises(ValueError):
            SubrowRef(*bad)


@pytest.mark.parametrize(
    "r, image, word",
    [((1, 2), (1, 3), "122"), ((3, 4), (4, 6), "112"), ((1, 16), (1, 24), None)],
)
def test_s_integral_examples(small, r, image, word):
    out = S.s_integral(small, SubrowRef(*r))
    assert (out.start, out.end) == image
    if word:
        assert S.materialize(small, out) == word


def test_s_integral_n(small):
    assert S.s_integral_n(small, SubrowRef(1, 2), 2) == SubrowRef(1, 5)
    assert S.s_integral_n(small, SubrowRef(1, 2), 0) == SubrowRef(1, 2)
    twice = S.s_integral_n(small, SubrowRef(3, 4), 2)
    assert twice == SubrowRef(6, 9)
    assert S.materialize(small, twice) == "2122"
    with pytest.raises(ValueError):
        S.s_integral_n(small, SubrowRef(1, 2), -1)
    with pytest.raises(OutOfWindow):
        S.s_integral_n(small, SubrowRef(1, 5000), 20)


def test_s_integral_matches_materialised_integration(small, ref):
    rng = np.random.default_rng(1)
    for _ in range(300):
        a = int(rng.integers(1, 4000))
        b = a + int(rng.integers(0, 50))
        out = S.s_integral(small, SubrowRef(a, b))
        u = oracles.integrate(ref[: a - 1])
        uw = oracles.integrate(ref[:b])
        assert (out.start, out.end) == (len(u) + 1, len(uw))
        # the image word is the (possibly mirrored) integral of the word
        w = ref[a - 1 : b]
        assert oracles.as_str(uw[len(u) :]) == oracles.as_str(oracles.integrate(w, S.integral_is_mirrored(SubrowRef(a, b))))


@pytest.mark.parametrize("r, d", [((4, 6), (3, 4)), ((1, 3), (1, 2))])
def test_s_derivative_examples(small, r, d):
    assert S.s_derivative(small, SubrowRef(*r)) == SubrowRef(*d)


def test_s_derivative_missing(small):
    assert not S.has_s_derivative(small, SubrowRef(3, 4))
    with pytest.raises(NoSDerivative):
        S.s_derivative(small, SubrowRef(3, 4))
    with pytest.raises(OutOfWindow):
        S.s_derivative(small, SubrowRef(1, small.length))


def test_s_derivative_many_agrees_with_scalar(small):
    starts, ends = np.meshgrid(np.arange(1, 80), np.arange(1, 80))
    keep = starts <= ends
    starts, ends = starts[keep], ends[keep]
    mask, ns, ne = S.s_derivative_many(small, starts, ends)
    for a, b, m, x, y in zip(starts.tolist(), ends.tolist(), mask.tolist(), ns.tolist(), ne.tolist()):
        r = SubrowRef(a, b)
        assert m == S.has_s_derivative(small, r)
        if m:
            assert S.s_derivative(small, r) == SubrowRef(x, y)
            assert S.s_integral(small, SubrowRef(x, y)) == r
        else:
            assert x == y == -1


def test_materialize(small):
    assert S.materialize(small, SubrowRef(1, 10)) == "1221121221"
    assert S.materialize(small, SubrowRef(4, 6)) == "112"
    for i in (1, 2, 77):
        assert S.materialize(small, SubrowRef(i, i))[0] == small.element(i)


def test_integral_lengths(small, ref):
    lengths = S.integral_lengths(small, SubrowRef(3, 4), 4)
    assert lengths[0] == 2
    u, uw = ref[:2], ref[:4]
    expect = []
    for _ in range(5):
        expect.append(len(uw) - len(u))
        u, uw = oracles.integrate(u), oracles.integrate(uw)
    assert lengths == expect
    assert str(integrate(small.word(3, 4))) == "112"
