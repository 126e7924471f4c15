import numpy as np
import pytest

from statbundle import Density, FiniteSpace, center


@pytest.fixture
def two_space():
    return FiniteSpace(np.array([0.5, 0.5]))


@pytest.fixture
def unit2(two_space):
    """The unit density on the symmetric two-point space."""
    return Density(two_space, np.array([1.0, 1.0]))


@pytest.fixture
def tilted2(two_space):
    return Density(two_space, np.array([1.5, 0.5]))


@pytest.fixture
def sign2(unit2):
    """The centered (+1, -1) statistic at the unit density."""
    return center(np.array([1.0, -1.0]), unit2)
