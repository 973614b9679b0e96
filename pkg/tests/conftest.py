import numpy as np
import pytest

from stepfit.core import PointSet
from stepfit.generate import PROFILES, generate


def random_set(rng, n, int_y=False, weights="mixed"):
    x = rng.permutation(n).astype(float)
    y = rng.integers(0, 8, n).astype(float) if int_y else rng.normal(size=n) * 3
    if weights == "unit":
        w = np.ones(n)
    elif weights == "mixed":
        w = rng.uniform(0.2, 5.0, n)
    else:
        w = rng.choice([1.0, 2.0, 5.0], n)
    return PointSet.from_arrays(x, y, w)


def profile_cases(count, n_max, k_max, seed=0):
    """(points, k, profile) cases cycling through every generator profile."""
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(count):
        profile = PROFILES[i % len(PROFILES)]
        weights = "heavy" if i % 4 == 3 else "uniform"
        n = int(rng.integers(1, n_max + 1))
        k = int(rng.integers(1, k_max + 1))
        cases.append((generate(n, k, seed * 100003 + i, weights, profile), k, profile))
    return cases


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rel_close(a, b, tol=1e-9):
    return abs(a - b) <= tol * (1.0 + max(abs(a), abs(b)))
