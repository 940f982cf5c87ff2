import numpy as np
import pytest
from hypothesis import settings

from funcdepth.core import FunctionalSample, make_grid

# First calls into the band-depth kernel include JIT compilation.
settings.register_profile("default", deadline=None)
settings.load_profile("default")


def constants(levels, T=3):
    grid = make_grid(T)
    return FunctionalSample(grid, np.array([[float(c)] * T for c in levels]))


@pytest.fixture
def three_constants():
    return constants([0, 1, 2])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
