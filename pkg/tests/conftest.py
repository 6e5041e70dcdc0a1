import numpy as np
import pytest


@pytest.fixture(autouse=True)
def _seed_numpy_legacy():
    # A few oracles use the legacy global RNG; pin it per test.
    np.random.seed(12345)
