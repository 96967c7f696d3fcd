import os

# Keep test runs from creating log files in the working tree.
os.environ.setdefault("LOG_DIR", "")

import numpy as np
import pytest

from app.services.sampling import sample_points
from tests.helpers import load


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def points_for():
    """points_for(name, n, seed=7) -> accepted sample points of a fixture."""

    def _points(name: str, n: int = 3, seed: int = 7):
        return sample_points(load(name), n, seed)

    return _points
