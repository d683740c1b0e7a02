import numpy as np
import pytest

from octads.octonion import Octonion


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_octonion(rng, scale=1.0):
    return Octonion(rng.standard_normal(8) * scale)
