import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tto_workbench import BlaschkeProduct, MobiusTransform

settings.register_profile(
    "default", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.register_profile("thorough", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def disk_points(radius=0.7):
    return st.builds(lambda r, t: complex(radius * np.sqrt(r) * np.exp(2j * np.pi * t)),
                     st.floats(0, 1), st.floats(0, 1))


def unimodular():
    return st.floats(0, 1).map(lambda t: complex(np.exp(2j * np.pi * t)))


def blaschke_products(min_order=1, max_order=4, radius=0.7):
    return st.builds(lambda c, zs: BlaschkeProduct(c, tuple(zs)),
                     unimodular(), st.lists(disk_points(radius), min_size=min_order,
                                            max_size=max_order))


def mobius_maps(radius=0.5):
    return st.builds(MobiusTransform, unimodular(), disk_points(radius))


@pytest.fixture
def rng():
    return np.random.default_rng(20100801)


def separated(B, gap=1e-3):
    """Zeros either coincide exactly or sit at least ``gap`` apart.

    Products within ~1e-8 of a more degenerate configuration are below the
    resolution of the tolerance-based orbit decision.
    """
    zs = B.zeros
    return all(zs[i] == zs[j] or abs(zs[i] - zs[j]) > gap
               for i in range(len(zs)) for j in range(i))
