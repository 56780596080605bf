import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hodgerees.linalg import I, Subspace
from hodgerees.mhs import MixedHodgeStructure

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


def h_c(c):
    """Dim 2: W_0 = <e1>, W_2 = everything, F^1 = <e2 + c e1>."""
    return MixedHodgeStructure(
        2,
        {0: Subspace.span([[1, 0]], 2), 2: Subspace.full(2)},
        {1: Subspace.span([[c, 1]], 2)},
    )


@pytest.fixture
def hci():
    return h_c(I)


@pytest.fixture
def hc0():
    return h_c(0)


seeds = st.integers(min_value=0, max_value=2**32 - 1).map(random.Random)
