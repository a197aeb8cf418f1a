import numpy as np
import pytest

from bjpm.slp import parse_slp

G5_TEXT = "SLP 5 4\n0:0\n1:1\n2:0 1\n3:2 2\n4:3 3\n"


@pytest.fixture
def g5():
    """Grammar expanding to 01010101."""
    return parse_slp(G5_TEXT)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
