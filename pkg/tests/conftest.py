import os

import numpy as np
import pytest
from hypothesis import settings

from evdfit.model import CensoredSample, ProgressiveSample

# reproducible by default; HYPOTHESIS_PROFILE=stress for a longer random search
settings.register_profile("default", derandomize=True)
settings.register_profile("stress", max_examples=1000, derandomize=False)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

TABLE1 = [12.5, 24.4, 58.2, 68.0, 69.1, 95.5, 96.6, 97.0, 114.2, 123.2, 125.6, 152.7]
TABLE2_X = [-1.6608, -0.2485, -0.0409, 0.2700, 1.0224, 1.5789, 1.8718, 1.9947]
TABLE2_R = [0, 0, 3, 0, 3, 0, 0, 5]


@pytest.fixture
def table1():
    return CensoredSample(TABLE1, n=20, mode="type2")


@pytest.fixture
def table2():
    return ProgressiveSample(TABLE2_X, TABLE2_R)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
