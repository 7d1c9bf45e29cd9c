import math

import pytest

from kpeigen.potential import from_levels, zero_potential


@pytest.fixture
def half_kp():
    """a = -1/2, b = 1/2, step at pi/2."""
    return from_levels(-0.5, 0.5, math.pi / 2)


@pytest.fixture
def third_kp():
    """a = -4/3, b = 2/3, step at pi/3."""
    return from_levels(-4 / 3, 2 / 3, math.pi / 3)


@pytest.fixture
def zero():
    return zero_potential()
