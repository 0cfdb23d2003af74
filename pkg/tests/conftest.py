import math

import numpy as np
import pytest

from src.constants import Constants
from src.spectra_closed import circle_spectrum, point_spectrum
from src.sturm_dtn import collar_geometry
from src.warp_profile import WarpedMetricSpec, build_profile, constant_profile

TWO_PI = 2.0 * math.pi


@pytest.fixture()
def make_cylinder():
    """
    Factory for [0, L] x S^1 in plain warp mode, n = k = 1.
    """
    def make(length=2.0, bc='both', fiber_length=TWO_PI, profile=None, fiber_count=32):
        return WarpedMetricSpec(
            n=1,
            k=1,
            profile=profile or constant_profile(length),
            base=collar_geometry(point_spectrum(), length, bc),
            fiber=circle_spectrum(fiber_length, fiber_count),
            mode=Constants.PLAIN_WARP,
        )
    return make


@pytest.fixture()
def growth_spec():
    """
    Volume-preserving metric on (S^1 x [0, 1]) x S^1 with the symmetric
    plateau profile, n = 2, k = 1.
    """
    def make(epsilon=0.05, delta=0.75):
        return WarpedMetricSpec(
            n=2,
            k=1,
            profile=build_profile(epsilon, delta, 1.0, symmetric=True),
            base=collar_geometry(circle_spectrum(TWO_PI, 64), 1.0, 'both'),
            fiber=circle_spectrum(TWO_PI, 64),
            mode=Constants.VOLUME_PRESERVING,
        )
    return make


@pytest.fixture()
def rng():
    return np.random.default_rng(7)
