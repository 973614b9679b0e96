import numpy as np
import pytest

from stepfit.anchored import (
    AnchorSide, AnchorSpec, anchored_j_step, doubly_anchored_two_step, eval_g_h,
    left_anchored_two_step, right_anchored_two_step,
)
from stepfit.core import PointSet, WeightedPoint, set_cost
from stepfit.oracle import oracle_anchored, oracle_k_step, oracle_one_center

from conftest import random_set, rel_close


def pts(*xyw):
    return [WeightedPoint(*p) for p in xyw]


def brute_split(ps, a, b):
    """All n+1 splits in x-order: (cost per split, g, h)."""
    o = ps.order()
    ca = ps.w[o] * np.abs(ps.y[o] - a)
    cb = ps.w[o] * np.abs(ps.y[o] - b)
    n = len(o)
    g = [ca[:t].max() if t else 0.0 for t in range(n + 1)]
    h = [cb[t:].max() if t < n else 0.0 for t in range(n + 1)]
    return np.maximum(g, h), g, h


class TestEvalGH:
    def test_example(self):
        assert eval_g_h(pts((1, 2, 1), (2, 8, 1)), 1.5, 0, 10) == (2, 2)

    def test_left_of_everything(self):
        P = pts((1, 2, 1), (2, 8, 1))
        assert eval_g_h(P, 0.0, 0, 10) == (0.0, 8.0)

    def test_random(self, rng):
        ps = random_set(rng, 20)
        for x in rng.uniform(-1, 21, 10):
            g = max([p.w * abs(p.y - 1) for p in ps.points() if p.x <= x], default=0.0)
            h = max([p.w * abs(p.y + 2) for p in ps.points() if p.x > x], default=0.0)
            assert eval_g_h(ps, x, 1, -2) == (g, h)


class TestDoubly:
    def test_zero_cost(self):
        s = doubly_anchored_two_step(pts((1, 0, 1), (2, 10, 1)), 0, 10)
        assert s.cost == 0 and s.boundary == 1 and s.x_bar == 1.5

    def test_cost_two(self):
        s = doubly_anchored_two_step(pts((1, 2, 1), (2, 8, 1)), 0, 10)
        assert s.cost == 2 and s.boundary == 1

    @pytest.mark.parametrize("int_y", [False, True])
    def test_random_against_splits(self, rng, int_y):
        for _ in range(60):
            ps = random_set(rng, 50, int_y=int_y, weights="levels")
            a, b = rng.normal(size=2) * 2
            cost, g, h = brute_split(ps, a, b)
            s = doubly_anchored_two_step(ps, a, b)
            assert s.cost == pytest.approx(cost.min(), rel=1e-12)
            assert s.cost == max(s.left_cost, s.right_cost)
            m = doubly_anchored_two_step(ps, a, b, maximal_left=True)
            assert m.boundary == int(np.flatnonzero(cost <= cost.min())[-1])

    def test_envelope_unimodal(self, rng):
        for _ in range(50):
            ps = random_set(rng, 15)
            _, g, h = brute_split(ps, *rng.normal(size=2))
            assert all(np.diff(g) >= 0) and all(np.diff(h) <= 0)

    def test_not_below_free_two_step(self, rng):
        for _ in range(30):
            ps = random_set(rng, 30)
            a, b = rng.normal(size=2)
            assert doubly_anchored_two_step(ps, a, b).cost >= oracle_k_step(ps, 2)[1] - 1e-12


class TestOneSided:
    def test_left_example(self):
        F, c = left_anchored_two_step(pts((1, 0, 1), (2, 6, 1), (3, 10, 1)), 0)
        assert c == 2 and F.segments[0].y == 0 and F.segments[1].y == 8
        assert F.segments[0].x_right == 1.5

    def test_right_example(self):
        F, c = right_anchored_two_step(pts((1, 10, 1), (2, 6, 1), (3, 0, 1)), 0)
        assert c == 2 and F.segments[1].y == 0 and F.segments[0].y == 8

    def test_single_point(self):
        F, c = left_anchored_two_step(pts((1, 4, 2)), 4)
        assert c == 0 and F.k == 2 and F.segments[0].y == 4

    def test_left_random_against_suffix_centers(self, rng):
        for _ in range(20):
            ps = random_set(rng, 80)
            a = float(rng.normal())
            o = ps.order()
            best = np.inf
            for t in range(len(o) + 1):
                g = float((ps.w[o[:t]] * np.abs(ps.y[o[:t]] - a)).max()) if t else 0.0
                h = oracle_one_center(ps.take(o[t:]))[1] if t < len(o) else 0.0
                best = min(best, max(g, h))
            F, c = left_anchored_two_step(ps, a)
            assert rel_close(c, best)
            assert F.segments[0].y == a
            assert rel_close(set_cost(ps, F), c)

    def test_right_is_reflected_left(self, rng):
        for _ in range(20):
            ps = random_set(rng, 60)
            b = float(rng.normal())
            _, cr = right_anchored_two_step(ps, b)
            _, cl = left_anchored_two_step(ps.reflected(), b)
            assert rel_close(cr, cl)

    def test_cost_at_least_free_optimum(self, rng):
        for _ in range(20):
            ps = random_set(rng, 40)
            assert left_anchored_two_step(ps, float(rng.normal()))[1] >= oracle_k_step(ps, 2)[1] - 1e-12

    def test_prune_rounds_exercised(self, rng):
        from stepfit.engine import Solver, SolveStats
        st = SolveStats()
        ps = random_set(rng, 400)
        Solver(stats=st).solve(ps, 2, left=0.0)
        assert any(r.anchors == (True, False) for r in st.rounds)
        assert st.violations == 0


class TestAnchoredJ:
    def test_j1(self, rng):
        ps = random_set(rng, 10)
        F, c = anchored_j_step(ps, AnchorSpec.left(0.5), 1)
        assert c == float((ps.w * np.abs(ps.y - 0.5)).max())

    def test_j2_delegates(self, rng):
        ps = random_set(rng, 30)
        assert anchored_j_step(ps, AnchorSpec.left(0.2), 2)[1] == left_anchored_two_step(ps, 0.2)[1]
        assert anchored_j_step(ps, AnchorSpec.right(0.2), 2)[1] == right_anchored_two_step(ps, 0.2)[1]

    @pytest.mark.parametrize("j", [3, 4])
    def test_random_left(self, rng, j):
        for _ in range(15):
            ps = random_set(rng, int(rng.integers(1, 61)))
            spec = AnchorSpec.left(float(rng.normal()))
            F, c = anchored_j_step(ps, spec, j)
            assert rel_close(c, oracle_anchored(ps, spec, j)[1])
            assert F.k == j and F.segments[0].y == spec.left_value

    def test_both_only_for_two(self, rng):
        ps = random_set(rng, 10)
        spec = AnchorSpec(AnchorSide.BOTH, 0.0, 1.0)
        with pytest.raises(ValueError):
            anchored_j_step(ps, spec, 3)
        F, c = anchored_j_step(ps, spec, 2)
        assert rel_close(c, oracle_anchored(ps, spec, 2)[1])

    def test_anchor_spec_validation(self):
        with pytest.raises(ValueError):
            AnchorSpec(AnchorSide.LEFT, None, 1.0)

    def test_recursive_subproblems(self, rng):
        # aux_base=0 sends every inner anchored solve through prune and search too
        for _ in range(4):
            ps = random_set(rng, 70)
            spec = AnchorSpec.left(float(rng.normal()))
            _, c = anchored_j_step(ps, spec, 3, base_size=8, aux_base=0)
            assert rel_close(c, oracle_anchored(ps, spec, 3)[1])


def test_anchor_direction_grid(rng):
    """Moving the right anchor above the optimal one never helps once the left side dominates."""
    checked = 0
    for _ in range(200):
        ps = random_set(rng, 12)
        a = float(rng.normal())
        F, c = left_anchored_two_step(ps, a)
        b = F.segments[1].y
        g, h = eval_g_h(ps, F.segments[0].x_right, a, b)
        if g < h:
            continue
        for b2 in b + np.linspace(0.01, 3, 12):
            assert doubly_anchored_two_step(ps, a, b2).cost >= c - 1e-12
        checked += 1
    assert checked > 20
