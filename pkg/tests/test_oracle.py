import itertools

import numpy as np
import pytest

from stepfit.anchored import AnchorSpec
from stepfit.core import WeightedPoint
from stepfit.oracle import (
    enumerate_k_step, oracle_anchored, oracle_feasibility, oracle_k_step, oracle_one_center,
)

from conftest import random_set, rel_close


def pts(*yw):
    return [WeightedPoint(i, y, w) for i, (y, w) in enumerate(yw)]


def test_one_center_examples():
    assert oracle_one_center(pts((0, 1), (10, 1))) == (5, 5)
    assert oracle_one_center(pts((0, 1), (10, 3))) == (7.5, 7.5)
    assert oracle_one_center(pts((4, 2))) == (4, 0)


def test_one_center_shared_ordinate():
    assert oracle_one_center(pts((1, 1), (1, 3))) == (1, 0)


def test_k_step_examples():
    P = [WeightedPoint(1, 0, 1), WeightedPoint(2, 1, 1), WeightedPoint(3, 9, 1), WeightedPoint(4, 10, 1)]
    assert oracle_k_step(P, 2)[1] == 0.5
    assert oracle_k_step(P, 1)[1] == oracle_one_center(P)[1]


def test_dp_matches_enumeration(rng):
    for _ in range(5):
        ps = random_set(rng, 30)
        assert rel_close(oracle_k_step(ps, 3)[1], enumerate_k_step(ps, 3))


def test_nonincreasing_in_k(rng):
    ps = random_set(rng, 40)
    costs = [oracle_k_step(ps, k)[1] for k in range(1, 8)]
    assert all(a >= b for a, b in zip(costs, costs[1:]))


def test_feasibility_threshold(rng):
    for _ in range(200):
        ps = random_set(rng, int(rng.integers(1, 25)), int_y=rng.random() < 0.5)
        k = int(rng.integers(1, 5))
        D = float(rng.uniform(0, 5))
        assert oracle_feasibility(ps, D, k) == (oracle_k_step(ps, k)[1] <= D * (1 + 1e-12) + 1e-12)


def test_feasibility_extremes(rng):
    ps = random_set(rng, 10)
    assert not oracle_feasibility(ps, 0, 3)
    assert oracle_feasibility(ps, 1e9, 1)


def test_anchored_j1():
    P = pts((0, 1), (4, 2))
    assert oracle_anchored(P, AnchorSpec.left(1), 1)[1] == 6


def test_anchored_left_j3_enumeration(rng):
    ps = random_set(rng, 40)
    a = 0.3
    o = ps.order()
    y, w = ps.y[o], ps.w[o]
    best = np.inf
    for s, t in itertools.combinations_with_replacement(range(41), 2):
        c = float((w[:s] * np.abs(y[:s] - a)).max()) if s else 0.0
        for lo, hi in ((s, t), (t, 40)):
            if hi > lo:
                c = max(c, oracle_one_center(list(zip(np.zeros(hi - lo), y[lo:hi], w[lo:hi])))[1])
        best = min(best, c)
    assert rel_close(oracle_anchored(ps, AnchorSpec.left(a), 3)[1], best)
