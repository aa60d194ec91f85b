import numpy as np
import pytest
from hypothesis import settings

# fixed example streams keep the suite reproducible run to run
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


def random_admissible(rng, d, alpha=None):
    """Corner endpoints and strictly interior inner control points."""
    if alpha is None:
        alpha = rng.choice([-1.0, 1.0], size=d)
    alpha = np.asarray(alpha, dtype=float)
    inner = rng.uniform(0.01, 0.99, size=(d, 2))
    return np.column_stack([0.5 * (1 - alpha), inner, 0.5 * (1 + alpha)]), alpha


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
