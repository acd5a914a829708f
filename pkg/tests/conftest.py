import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from kolakoski import engine  # noqa: E402

import oracles  # noqa: E402


@pytest.fixture(scope="session")
def ref():
    return oracles.kolakoski(20000)


@pytest.fixture(scope="session")
def small():
    return engine.generate(20000)


@pytest.fixture(scope="session")
def big():
    return engine.generate(10**6)


@pytest.fixture(scope="session")
def ref_ps():
    """Pure-python prefix sums over 3*10^5 digits."""
    return oracles.prefix_sums(oracles.kolakoski(300000))
