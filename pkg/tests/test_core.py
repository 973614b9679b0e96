import math

import numpy as np
import pytest

from stepfit.core import (
    CostModel, DomainError, InstanceError, PointSet, Segment, StepFunction, WeightedPoint,
    bisectors, critical_points, point_cost, set_cost, step_function_from_breaks,
)

from conftest import rel_close


def step(y, a=0.0, b=1.0):
    return StepFunction((Segment(a, b, y),))


class TestPointCost:
    def test_linear(self):
        assert point_cost(WeightedPoint(0, 3, 2), 5) == 4

    def test_zero_distance(self):
        assert point_cost(WeightedPoint(0, 3, 2), 3) == 0

    def test_squared(self):
        assert point_cost(WeightedPoint(0, 3, 2), 5, "squared") == 8


class TestSetCost:
    def test_single_step(self):
        Q = [WeightedPoint(0, 0, 1), WeightedPoint(1, 10, 2)]
        assert set_cost(Q, step(4)) == 12

    def test_empty(self):
        assert set_cost(PointSet.from_arrays([], [], []), step(4)) == 0

    def test_two_step_matches_per_point(self, rng):
        ps = PointSet.from_arrays(rng.uniform(0, 10, 6), rng.normal(size=6), rng.uniform(0.5, 2, 6))
        F = StepFunction((Segment(0, 5, 0.3), Segment(5, 10, -0.4)))
        expect = max(p.w * abs(p.y - (0.3 if p.x < 5 else -0.4)) for p in ps.points())
        assert set_cost(ps, F) == pytest.approx(expect, rel=1e-12)

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            set_cost([WeightedPoint(2, 0, 1)], step(0))

    def test_last_segment_closed(self):
        F = StepFunction((Segment(0, 1, 0.0), Segment(1, 2, 5.0)))
        assert F(1.0) == 5.0 and F(2.0) == 5.0 and F(0.0) == 0.0

    def test_squared_is_linear_on_sqrt_weights(self, rng):
        ps = PointSet.from_arrays(rng.uniform(0, 1, 30), rng.normal(size=30), rng.uniform(0.1, 9, 30))
        F = step(0.2)
        lin = set_cost(ps.with_weights(np.sqrt(ps.w)), F)
        assert rel_close(set_cost(ps, F, "squared"), lin * lin, 1e-12)


class TestCriticalPoints:
    def test_symmetric(self):
        Q = [WeightedPoint(0, 0, 1), WeightedPoint(1, 10, 1)]
        assert len(critical_points(Q, step(5))) == 2

    def test_heavy_point(self):
        Q = [WeightedPoint(0, 0, 1), WeightedPoint(1, 10, 3)]
        crit = critical_points(Q, step(5))
        assert [(p.y, p.w) for p in crit] == [(10, 3)]

    def test_single(self):
        assert len(critical_points([WeightedPoint(0.5, 1, 1)], step(7))) == 1


class TestBisectors:
    def test_equal_weights(self):
        assert bisectors(WeightedPoint(0, 0, 1), WeightedPoint(1, 10, 1)) == (5, 5)

    def test_unequal(self):
        assert bisectors(WeightedPoint(0, 0, 1), WeightedPoint(1, 10, 3)) == (7.5, 15)

    def test_squared_reduction(self):
        # weights (4, 1) become (2, 1): 2|y| = |10 - y| at y = 10/3 and y = -10
        lo, hi = bisectors(WeightedPoint(0, 0, 4), WeightedPoint(1, 10, 1), "squared")
        assert lo == pytest.approx(-10) and hi == pytest.approx(10 / 3)
        for y in (lo, hi):
            assert 4 * y * y == pytest.approx((10 - y) ** 2)

    def test_squared_heavier_above(self):
        lo, hi = bisectors(WeightedPoint(0, 0, 1), WeightedPoint(1, 10, 4), "squared")
        assert (lo, hi) == (pytest.approx(20 / 3), pytest.approx(20))

    def test_identical_pair_rejected(self):
        with pytest.raises(InstanceError):
            bisectors(WeightedPoint(0, 3, 2), WeightedPoint(1, 3, 2))

    def test_same_side_dominance(self, rng):
        for _ in range(200):
            p = WeightedPoint(0, *rng.normal(size=1), rng.uniform(0.1, 5))
            q = WeightedPoint(1, *rng.normal(size=1), rng.uniform(0.1, 5))
            lo, hi = bisectors(p, q)
            assert lo <= hi
            inner = min(p.y, q.y) <= lo <= max(p.y, q.y) or min(p.y, q.y) <= hi <= max(p.y, q.y)
            assert inner
            for region in (np.linspace(hi + 1e-6, hi + 50, 20), np.linspace(lo - 50, lo - 1e-6, 20)):
                d = [point_cost(p, y) - point_cost(q, y) for y in region]
                assert all(v > 0 for v in d) or all(v < 0 for v in d)


class TestValidation:
    @pytest.mark.parametrize("w", [0.0, -1.0, math.inf, math.nan])
    def test_bad_weight(self, w):
        with pytest.raises(InstanceError):
            WeightedPoint(0, 0, w)

    def test_nonfinite_array(self):
        with pytest.raises(InstanceError):
            PointSet.from_arrays([0, 1], [0, math.nan], [1, 1])

    def test_duplicate_ids(self):
        with pytest.raises(InstanceError):
            PointSet.from_points([WeightedPoint(0, 0, 1, 3), WeightedPoint(1, 0, 1, 3)])

    def test_tie_order(self):
        ps = PointSet.from_arrays([1, 1, 0], [2, 1, 5], [1, 1, 1])
        assert ps.order().tolist() == [2, 1, 0]


def test_breaks_at_midpoints():
    F = step_function_from_breaks(np.array([0.0, 1.0, 3.0, 4.0]), [2, 0, 2], [1.0, 1.0, 2.0])
    assert [s.x_left for s in F.segments] == [0.0, 2.0, 2.0]
    assert F.segments[1].width == 0.0
