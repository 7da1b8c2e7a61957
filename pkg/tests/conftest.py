import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from geometry.grid import rasterize
from geometry.obstacles import Empty, PeriodicSlits
from theory.nonlinearity import Nonlinearity, build_super_sub_pair, solve_wave_profile


@pytest.fixture(scope='session')
def nl():
    return Nonlinearity(alpha=0.25)


@pytest.fixture(scope='session')
def wave(nl):
    return solve_wave_profile(nl)


@pytest.fixture(scope='session')
def pair(nl, wave):
    return build_super_sub_pair(nl, wave)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def small_empty_grid():
    return rasterize(Empty(), 0.5, extent=(-5.0, 5.0, 2.0))


@pytest.fixture(scope='session')
def slit_grid():
    """Single slit of width 0.25 through a unit-thick wall, period 4, at h = 0.125."""
    return rasterize(PeriodicSlits(thickness=1.0, slit_width=0.25, period=4.0), 0.125,
                     extent=(-4.0, 24.0, 4.0))
