from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from kolakoski import engine
from kolakoski import subrows as S
from kolakoski import words as W
from kolakoski.errors import NotDifferentiable
from kolakoski.subrows import SubrowRef
from kolakoski.words import Word

digits = st.lists(st.sampled_from([1, 2]), max_size=60)
WIN = engine.generate(50000)


@st.composite
def smooth_words(draw):
    """Words with runs <= 2 that survive trimming unchanged (outer runs of length 2)."""
    runs = [2] + draw(st.lists(st.sampled_from([1, 2]), max_size=30)) + [2]
    first = draw(st.sampled_from([1, 2]))
    out = []
    for i, r in enumerate(runs):
        out += [first if i % 2 == 0 else 3 - first] * r
    return Word(out)


@given(digits)
def test_mirror_and_reverse_are_involutions(d):
    w = Word(d)
    assert W.mirror(W.mirror(w)) == w
    assert W.reverse(W.reverse(w)) == w
    assert W.mirror(W.reverse(w)) == W.reverse(W.mirror(w))


@given(digits, st.booleans())
def test_integral_length_is_digit_sum(d, mirrored):
    w = Word(d)
    assert len(W.integrate(w, mirrored)) == W.word_sum(w)
    assert W.integrate(w, True) == W.mirror(W.integrate(w))


@given(digits)
def test_derivative_inverts_integration(d):
    w = Word(d)
    image = W.integrate(w)
    assert W.run_lengths(image.digits()).tolist() == d


@given(smooth_words())
def test_integrate_derivative_round_trip(w):
    assert W.integrate(W.derivative(w), mirrored=w[0] == 2) == w


@given(digits)
def test_derivative_is_mirror_invariant(d):
    w = Word(d)
    try:
        a = W.derivative(w)
    except NotDifferentiable:
        try:
            W.derivative(W.mirror(w))
        except NotDifferentiable:
            return
        raise AssertionError("mirror changed differentiability")
    assert W.derivative(W.mirror(w)) == a


@given(digits, digits)
def test_concatenation(a, b):
    assert str(Word(a) + Word(b)) == oracles.as_str(a + b)
    assert W.word_sum(Word(a) + Word(b)) == W.word_sum(Word(a)) + W.word_sum(Word(b))


@settings(max_examples=200)
@given(st.integers(1, 20000), st.integers(0, 200))
def test_subrows_are_c_infinity(a, length):
    assert W.smoothness_order(WIN.word(a, a + length)) == W.INFINITE


@settings(max_examples=300)
@given(st.integers(1, 20000), st.integers(2, 300))
def test_length_estimates(a, length):
    r = SubrowRef(a, a + length)
    img = S.s_integral(WIN, r)
    if len(r) >= 3:
        assert 6 * len(r) <= 5 * len(img) <= 9 * len(r)


@settings(max_examples=300)
@given(st.integers(1, 20000), st.integers(0, 300))
def test_s_integral_word_dichotomy(a, length):
    r = SubrowRef(a, a + length)
    img = S.s_integral(WIN, r)
    assert S.materialize(WIN, img) == W.integrate(S.materialize(WIN, r), mirrored=S.integral_is_mirrored(r))
    assert S.s_derivative(WIN, img) == r
