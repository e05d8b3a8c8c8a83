import numpy as np
import pytest

from lvmelnikov.geometry import SystemParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def x29():
    return SystemParams.x29(0.5, 1.5)


@pytest.fixture
def x210():
    return SystemParams.x210(1.0)
