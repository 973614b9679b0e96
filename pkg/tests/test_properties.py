import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from stepfit.core import PointSet, set_cost
from stepfit.kstep import feasibility_test, k_step
from stepfit.one_center import weighted_one_center
from stepfit.oracle import oracle_feasibility, oracle_k_step, oracle_one_center

from conftest import rel_close

coord = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
small_int = st.integers(-5, 5).map(float)
weight = st.sampled_from([0.5, 1.0, 2.0, 3.0]) | st.floats(0.01, 50)


@st.composite
def point_sets(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    ys = draw(st.lists(small_int | coord, min_size=n, max_size=n))
    ws = draw(st.lists(weight, min_size=n, max_size=n))
    xs = draw(st.permutations(range(n)))
    return PointSet.from_arrays(np.array(xs, dtype=float), ys, ws)


common = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@common
@given(point_sets(), st.integers(1, 5))
def test_k_step_equals_oracle(ps, k):
    r = k_step(ps, k)
    assert rel_close(r.cost, oracle_k_step(ps, k)[1])
    assert rel_close(set_cost(ps, r.fit), r.cost)


@common
@given(point_sets(60))
def test_one_center_equals_oracle(ps):
    assert rel_close(weighted_one_center(ps)[1], oracle_one_center(ps)[1])


@common
@given(point_sets(30), st.integers(1, 4), st.floats(0, 200))
def test_feasibility_matches_sweep(ps, k, D):
    assert feasibility_test(ps, D, k).feasible == oracle_feasibility(ps, D, k)


@common
@given(point_sets(30))
def test_cost_nonincreasing_in_k(ps):
    costs = [k_step(ps, k).cost for k in range(1, 6)]
    assert all(a >= b - 1e-12 * (1 + a) for a, b in zip(costs, costs[1:]))


@common
@given(point_sets(30), st.integers(1, 4), st.sampled_from([0.25, 2.0, 8.0]), st.floats(-50, 50))
def test_scaling_and_translation(ps, k, lam, c):
    base = k_step(ps, k)
    scaled = k_step(ps.with_weights(ps.w * lam), k)
    assert scaled.cost == base.cost * lam
    moved = k_step(PointSet(ps.x, ps.y + c, ps.w, ps.ids), k)
    assert rel_close(moved.cost, base.cost, 1e-9)


@common
@given(point_sets(30), st.integers(1, 4))
def test_squared_is_linear_on_sqrt_weights(ps, k):
    sq = k_step(ps, k, "squared").cost
    lin = k_step(ps.with_weights(np.sqrt(ps.w)), k).cost
    assert rel_close(sq, lin * lin, 1e-12)
