import os
import subprocess
import sys

import numpy as np
import pytest

import oracles
from kolakoski import _kernels as K

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 100, 12345])
def test_numpy_generator_matches_oracle(n):
    assert K.generate_digits_numpy(n).tolist() == oracles.kolakoski(n)


@needs_numba
@pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 100, 12345, 10**6])
def test_numba_generator_matches_numpy(n):
    a, b = K.generate_digits_numba(n), K.generate_digits_numpy(n)
    assert a.dtype == b.dtype == np.uint8
    assert np.array_equal(a, b)


@needs_numba
def test_level_maps_agree():
    digits = K.generate_digits_numpy(5000)
    ps = np.concatenate(([0], np.cumsum(digits, dtype=np.int64)))
    rng = np.random.default_rng(0)
    pts = rng.integers(0, 5001, size=2000).astype(np.int64)
    for depth in (0, 1, 5, 25):
        a, b = K.level_maps_numba(ps, pts, depth), K.level_maps_numpy(ps, pts, depth)
        assert a.shape == (depth + 1, pts.size)
        assert np.array_equal(a, b)


def test_level_maps_against_scalar_loop():
    digits = K.generate_digits_numpy(3000)
    ps = oracles.prefix_sums(digits.tolist())
    pts = np.arange(0, 3001, 37, dtype=np.int64)
    out = K.level_maps_numpy(np.asarray(ps, dtype=np.int64), pts, 6)
    for j, x in enumerate(pts.tolist()):
        for h in range(7):
            assert out[h, j] == x
            x = ps[x] if 0 <= x < len(ps) else -1


def _flag_run(value):
    env = dict(os.environ, KOLA_DISABLE_NUMBA=value)
    code = "from kolakoski import _kernels as K, engine; print(K.USING_NUMBA, str(engine.generate(12).prefix(12)))"
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()


def test_env_flag_selects_numpy():
    using, prefix = _flag_run("1")
    assert using == "False"
    assert prefix == "122112122122"


@needs_numba
def test_env_flag_zero_keeps_numba():
    using, prefix = _flag_run("0")
    assert using == "True"
    assert prefix == "122112122122"
