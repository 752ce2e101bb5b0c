import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lpns.fields import cosine_mode
from lpns.spectral import Grid, forward_transform

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("LPNS_HYPOTHESIS_EXAMPLES", "40")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")


@pytest.fixture
def grid1():
    return Grid(1, 32)


@pytest.fixture
def cos3(grid1):
    return cosine_mode(grid1, 3)


@pytest.fixture
def cos3_hat(cos3):
    return forward_transform(cos3)

