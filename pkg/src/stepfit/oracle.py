"""Brute-force reference solvers.

These sort, enumerate and tabulate freely; they are meant for instances of a
few hundred points and share no code with the prune-and-search path.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .anchored import AnchorSide, AnchorSpec
from .core import CostModel, Segment, StepFunction, as_pointset


def _candidates(y: np.ndarray, w: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(len(y), 1)
    inner = (w[i] * y[i] + w[j] * y[j]) / (w[i] + w[j])
    diff = w[i] != w[j]
    outer = (w[i] * y[i] - w[j] * y[j])[diff] / (w[i] - w[j])[diff]
    return np.unique(np.concatenate([y, inner, outer]))


def oracle_one_center(points, model: CostModel | str = CostModel.LINEAR) -> tuple[float, float]:
    """Minimum of the upper envelope, scanning every crossing height and ordinate."""
    model = CostModel.parse(model)
    ps = as_pointset(points)
    if len(ps) == 0:
        raise ValueError("empty point set")
    y, w = ps.y, model.effective_weights(ps.w)
    cand = _candidates(y, w)
    # the envelope of a few points is a lower bound; only candidates under an
    # attained value can be optimal, and every minimizer survives the filter
    few = [int(np.argmin(y)), int(np.argmax(y))]
    bound = np.inf
    for _ in range(64):
        lower = _envelope(cand, y[few], w[few])
        cand = cand[lower <= bound]
        lower = lower[lower <= bound]
        if len(cand) <= 64:
            break
        cost = _point_costs(cand[int(np.argmin(lower))], y, w)
        bound = min(bound, float(cost.max()))
        few.append(int(np.argmax(cost)))
    env = _envelope(cand, y, w)
    t = int(np.argmin(env))  # candidates are sorted, so ties go to the smaller height
    return float(cand[t]), model.report(float(env[t]))


def _point_costs(c: float, y: np.ndarray, w: np.ndarray) -> np.ndarray:
    # same arithmetic as _envelope, so bounds compare exactly
    wy, wc = w * y, c * w
    return np.maximum(wy - wc, wc - wy)


def _envelope(cand: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
    """max_i w_i |y_i - c| for every candidate c, in memory-bounded chunks."""
    env = np.empty(len(cand))
    wy = w * y
    step = max(1, (1 << 18) // len(y))
    for s in range(0, len(cand), step):
        wc = cand[s:s + step, None] * w[None, :]
        # w|y - c| = max(wy - wc, wc - wy)
        env[s:s + step] = np.maximum((wy - wc).max(axis=1), (wc - wy).max(axis=1))
    return env


def _interval_costs(y: np.ndarray, w: np.ndarray) -> np.ndarray:
    """C[t, i] = 1-center cost of sorted points t..i (inclusive), 0 below the diagonal.

    Uses the fact that the 1-center cost is the largest pairwise
    ``w_s w_u |y_s - y_u| / (w_s + w_u)``.
    """
    n = len(y)
    pair = w[:, None] * w[None, :] * np.abs(y[:, None] - y[None, :]) / (w[:, None] + w[None, :])
    pair = np.triu(pair, 1)
    C = np.zeros((n, n))
    for t in range(n - 1, -1, -1):
        row = np.maximum.accumulate(pair[t])
        C[t] = row if t == n - 1 else np.maximum(row, C[t + 1])
    return C


def _dp(y, w, k, left=None, right=None):
    """Optimal bucket edges (k+1 prefix counts) and cost; buckets may be empty."""
    n = len(y)
    C = _interval_costs(y, w)

    def run(t, i):  # cost of points t..i-1
        return C[t, i - 1] if i > t else 0.0

    free_first = left is None
    best = np.empty(n + 1)
    for i in range(n + 1):
        best[i] = run(0, i) if free_first else (float((w[:i] * np.abs(y[:i] - left)).max()) if i else 0.0)
    choice = [np.zeros(n + 1, dtype=int)]
    last_free = k - (1 if right is not None else 0)
    for _ in range(1, last_free):
        nxt = np.empty(n + 1)
        arg = np.zeros(n + 1, dtype=int)
        for i in range(n + 1):
            vals = [max(best[t], run(t, i)) for t in range(i + 1)]
            arg[i] = int(np.argmin(vals))
            nxt[i] = vals[arg[i]]
        best = nxt
        choice.append(arg)
    if right is not None:
        tail = [float((w[t:] * np.abs(y[t:] - right)).max()) if t < n else 0.0 for t in range(n + 1)]
        if k == 1:
            vals = tail[:1]
            t = 0
        else:
            vals = [max(best[t], tail[t]) for t in range(n + 1)]
            t = int(np.argmin(vals))
        cost = vals[t]
        edges = [n, t]
        i = t
    else:
        cost = best[n]
        edges = [n]
        i = n
    for arg in reversed(choice[1:]):
        i = int(arg[i])
        edges.append(i)
    edges.append(0)
    edges = edges[::-1]
    if right is not None and k == 1:
        edges = [0, n]
    return edges, float(cost)


def _fit(ps, model, k, left=None, right=None):
    model = CostModel.parse(model)
    if len(ps) == 0:
        raise ValueError("empty point set")
    order = ps.order()
    x, y = ps.x[order], ps.y[order]
    w = model.effective_weights(ps.w[order])
    edges, cost = _dp(y, w, k, left, right)
    heights = []
    for h in range(k):
        a, b = edges[h], edges[h + 1]
        if h == 0 and left is not None:
            heights.append(left)
        elif h == k - 1 and right is not None:
            heights.append(right)
        elif b > a:
            yy = y[a:b]
            heights.append(oracle_one_center(list(zip(x[a:b], yy, w[a:b])))[0])
        else:
            heights.append(heights[-1] if heights else float(y[0]))
    cuts = []
    for e in edges[1:-1]:
        if e <= 0:
            cuts.append(float(x[0]))
        elif e >= len(x):
            cuts.append(float(x[-1]))
        else:
            cuts.append(0.5 * (float(x[e - 1]) + float(x[e])))
    xs = [float(x[0]), *cuts, float(x[-1])]
    F = StepFunction(tuple(Segment(xs[i], xs[i + 1], heights[i]) for i in range(k)))
    return F, model.report(cost), edges


def oracle_k_step(points, k: int, model: CostModel | str = CostModel.LINEAR):
    """Exact optimal k-step function by dynamic programming over break positions."""
    if k < 1:
        raise ValueError("k must be at least 1")
    F, cost, _ = _fit(as_pointset(points), model, k)
    return F, cost


def oracle_k_step_edges(points, k: int, model: CostModel | str = CostModel.LINEAR):
    """Like :func:`oracle_k_step` but also returns the bucket edges (prefix counts)."""
    return _fit(as_pointset(points), model, k)


def oracle_anchored(points, anchor: AnchorSpec, j: int, model: CostModel | str = CostModel.LINEAR):
    if anchor.side is AnchorSide.BOTH and j < 2:
        raise ValueError("doubly anchored needs at least two steps")
    F, cost, _ = _fit(as_pointset(points), model, j, anchor.left_value, anchor.right_value)
    return F, cost


def oracle_feasibility(points, D: float, k: int, model: CostModel | str = CostModel.LINEAR) -> bool:
    """Sorted greedy: extend each step while the admissible heights still overlap."""
    model = CostModel.parse(model)
    ps = as_pointset(points)
    D = model.to_linear(D)
    order = ps.order()
    steps = 0
    lo, hi = -math.inf, math.inf
    for i in order:
        wi = float(model.effective_weights(ps.w[i:i + 1])[0])
        a, b = ps.y[i] - D / wi, ps.y[i] + D / wi
        nlo, nhi = max(lo, a), min(hi, b)
        if steps == 0 or nlo > nhi + 1e-12 * (1 + abs(nlo) + abs(nhi)):
            steps += 1
            lo, hi = a, b
        else:
            lo, hi = nlo, nhi
    return steps <= k


def enumerate_k_step(points, k: int, model: CostModel | str = CostModel.LINEAR) -> float:
    """Optimal cost by trying every choice of k-1 breaks; exponential, tiny inputs only."""
    model = CostModel.parse(model)
    ps = as_pointset(points)
    order = ps.order()
    y, w = ps.y[order], model.effective_weights(ps.w[order])
    n = len(y)
    best = math.inf
    for cuts in itertools.combinations_with_replacement(range(n + 1), k - 1):
        edges = (0, *cuts, n)
        c = 0.0
        for a, b in zip(edges, edges[1:]):
            if b > a:
                c = max(c, oracle_one_center(list(zip(np.zeros(b - a), y[a:b], w[a:b])))[1])
        best = min(best, c)
    return model.report(best)


def _greedy_reach(y, w, D):
    """reach[i] = number of leading points covered by i greedy steps at level D."""
    reach = [0]
    pos, n = 0, len(y)
    while pos < n:
        lo, hi = -math.inf, math.inf
        t = pos
        while t < n:
            a, b = y[t] - D / w[t], y[t] + D / w[t]
            nlo, nhi = max(lo, a), min(hi, b)
            if nlo > nhi + 1e-12 * (1 + abs(nlo) + abs(nhi)):
                break
            lo, hi = nlo, nhi
            t += 1
        pos = t
        reach.append(pos)
    return reach


def oracle_spanned(points, lo: int, hi: int, k: int,
                   model: CostModel | str = CostModel.LINEAR, tol: float = 1e-9) -> bool:
    """Does one step of some optimal k-step solution cover sorted ranks lo..hi-1?

    With i steps before it, the step can start no later than the greedy
    prefix reach and end no earlier than the greedy suffix reach; the
    tightest such run must fit in a single step at the optimal cost.
    """
    model = CostModel.parse(model)
    ps = as_pointset(points)
    order = ps.order()
    y = [float(v) for v in ps.y[order]]
    w = [float(v) for v in model.effective_weights(ps.w[order])]
    n = len(y)
    D = model.to_linear(oracle_k_step(ps, k, model)[1]) if n else 0.0
    fwd = _greedy_reach(y, w, D)
    bwd = [n - r for r in _greedy_reach(y[::-1], w[::-1], D)]
    for i in range(k):
        s = min(fwd[min(i, len(fwd) - 1)], lo)
        rest = k - 1 - i
        e = max(bwd[min(rest, len(bwd) - 1)], hi)
        if e <= s:
            return True
        c = oracle_one_center(list(zip(np.zeros(e - s), y[s:e], w[s:e])))[1]
        if c <= D * (1 + tol) + 1e-12:
            return True
    return False
