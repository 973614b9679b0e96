"""Weighted 1-center on a line by prune and search.

The optimal 1-step function of a point set only depends on the ordinates and
weights, so everything here works on ``(y, w)`` arrays.  Each round pairs the
points, locates two heights ``U`` and ``L`` from the pair bisectors, checks on
which side of each the critical points lie, and drops the dominated member of
at least a sixth of the pairs.  The cost ``max w|y - c|`` is convex in ``c``,
so a point that is dominated on an open interval around the center can go.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import CostModel, PointSet, as_pointset
from .selection import select_value

BASE_SIZE = 32
SIDE_TOL = 1e-12


class Side(enum.Enum):
    ABOVE = "above"
    BELOW = "below"
    BOTH = "both"


@dataclass
class PairClassification:
    U: float
    L: float
    first: np.ndarray    # positions of the first member of each pair
    second: np.ndarray
    lower: np.ndarray    # lower bisector per pair
    upper: np.ndarray
    in_upper_high: np.ndarray = field(repr=False)  # upper bisector >= U
    in_upper_low: np.ndarray = field(repr=False)   # upper bisector <= U
    in_lower_low: np.ndarray = field(repr=False)   # lower bisector <= L
    in_lower_high: np.ndarray = field(repr=False)  # lower bisector >= L

    @property
    def m(self) -> int:
        return len(self.first)


@dataclass
class OneCenterStats:
    rounds: int = 0
    removed: list = field(default_factory=list)
    sizes: list = field(default_factory=list)
    violations: int = 0


def pair_bisectors(yp, wp, yq, wq) -> tuple[np.ndarray, np.ndarray]:
    inner = (wp * yp + wq * yq) / (wp + wq)
    same = wp == wq
    denom = np.where(same, 1.0, wp - wq)
    outer = np.where(same, inner, (wp * yp - wq * yq) / denom)
    outer = np.where(yp == yq, yp, outer)
    return np.minimum(inner, outer), np.maximum(inner, outer)


def classify(y: np.ndarray, w: np.ndarray, method: str = "introselect") -> PairClassification:
    n = len(y)
    if n < 2:
        raise ValueError("need at least two points to form pairs")
    first = np.arange(0, n - 1, 2)
    second = first + 1
    lower, upper = pair_bisectors(y[first], w[first], y[second], w[second])
    m = len(first)
    r = -(-m // 3)
    U = select_value(upper, r - 1, method)
    L = select_value(lower, m - r, method)
    return PairClassification(
        U, L, first, second, lower, upper,
        upper >= U, upper <= U, lower <= L, lower >= L,
    )


def classify_pairs(points, model: CostModel | str = CostModel.LINEAR) -> PairClassification:
    """Pair consecutive points in (x, y, id) order and pick the U / L heights.

    ``U`` is the ceil(m/3)-th smallest upper bisector and ``L`` the
    ceil(m/3)-th largest lower bisector over the m pairs.
    """
    ps = as_pointset(points)
    o = ps.order()
    w = CostModel.parse(model).effective_weights(ps.w[o])
    cls = classify(ps.y[o], w)
    # report pair members as positions in the caller's point set
    cls.first, cls.second = o[cls.first], o[cls.second]
    return cls


def side_at(y: np.ndarray, w: np.ndarray, level: float, tol: float = SIDE_TOL) -> tuple[Side, float]:
    c = w * np.abs(y - level)
    top = float(c.max())
    if top <= 0.0:
        return Side.BOTH, 0.0
    crit = c >= top - tol * (1.0 + top)
    above = bool(np.any(crit & (y > level)))
    below = bool(np.any(crit & (y < level)))
    if above and below:
        return Side.BOTH, top
    return (Side.ABOVE if above else Side.BELOW), top


def side_of_critical(points, level: float, model: CostModel | str = CostModel.LINEAR) -> Side:
    ps = as_pointset(points)
    return side_at(ps.y, CostModel.parse(model).effective_weights(ps.w), level)[0]


def prune_mask(y: np.ndarray, w: np.ndarray, cls: PairClassification,
               side_u: Side, side_l: Side) -> np.ndarray:
    """Keep-mask after dropping the dominated member of the qualifying pairs.

    Neither side may be BOTH.  Pairs sharing an ordinate lose their lighter
    member regardless of the case.
    """
    if Side.BOTH in (side_u, side_l):
        raise ValueError("a BOTH side report means the height is already optimal")
    f, s = cls.first, cls.second
    yp, wp, yq, wq = y[f], w[f], y[s], w[s]
    heavier_p = wp > wq
    equal_w = wp == wq
    if side_u is Side.ABOVE:
        # center > U: above each upper bisector the steeper line wins
        use = cls.in_upper_low
        keep_p = heavier_p | (equal_w & (yp < yq))
    elif side_l is Side.BELOW:
        use = cls.in_lower_high
        keep_p = heavier_p | (equal_w & (yp > yq))
    else:
        # L < center < U: between the two crossings the lighter line wins
        use = cls.in_upper_high & cls.in_lower_low & ~equal_w
        keep_p = wp < wq
    same_y = yp == yq
    keep_p = np.where(same_y, wp >= wq, keep_p)
    use = use | same_y
    keep = np.ones(len(y), dtype=bool)
    keep[np.where(keep_p, s, f)[use]] = False
    return keep


def prune_one_sixth(points, cls: PairClassification, side_u: Side, side_l: Side,
                    model: CostModel | str = CostModel.LINEAR) -> PointSet:
    ps = as_pointset(points)
    w = CostModel.parse(model).effective_weights(ps.w)
    keep = prune_mask(ps.y, w, cls, side_u, side_l)
    removed = len(ps) - int(keep.sum())
    assert removed >= len(ps) // 6, f"pruned {removed} of {len(ps)} points"
    return ps.take(np.flatnonzero(keep))


def pair_cost(y: np.ndarray, w: np.ndarray, h: float) -> float:
    """Cost of a 1-center at h from its critical pair, w_a w_b (y_a - y_b) / (w_a + w_b).

    At the optimal height the heaviest costs above and below are equal, and
    this closed form gives that value without the rounding of w |y - h| at a
    float height.  Away from the optimum it is a lower bound.
    """
    up, dn = y >= h, y <= h
    if not up.any() or not dn.any():
        return 0.0
    ca, cb = w * (y - h), w * (h - y)
    a = np.flatnonzero(up)[int(np.argmax(ca[up]))]
    b = np.flatnonzero(dn)[int(np.argmax(cb[dn]))]
    return float(w[a] * w[b] * (y[a] - y[b]) / (w[a] + w[b]))


def one_center_small(y: np.ndarray, w: np.ndarray) -> tuple[float, float]:
    """Exact 1-center by the pairwise formula; O(n^2), for small sets."""
    n = len(y)
    if n == 1:
        return float(y[0]), 0.0
    i, j = np.triu_indices(n, 1)
    c = w[i] * w[j] * np.abs(y[i] - y[j]) / (w[i] + w[j])
    t = int(np.argmax(c))
    if c[t] <= 0.0:
        return float(y[0]), 0.0
    a, b = i[t], j[t]
    return float((w[a] * y[a] + w[b] * y[b]) / (w[a] + w[b])), float(c[t])


def one_center_arrays(y: np.ndarray, w: np.ndarray, base_size: int = BASE_SIZE,
                      stats: OneCenterStats | None = None,
                      method: str = "introselect") -> tuple[float, float]:
    """Linear-time weighted 1-center of ordinates ``y`` with weights ``w``."""
    if len(y) == 0:
        return 0.0, 0.0
    while len(y) > base_size:
        cls = classify(y, w, method)
        s_u, _ = side_at(y, w, cls.U)
        if s_u is Side.BOTH:
            return cls.U, pair_cost(y, w, cls.U)
        s_l, _ = side_at(y, w, cls.L)
        if s_l is Side.BOTH:
            return cls.L, pair_cost(y, w, cls.L)
        keep = prune_mask(y, w, cls, s_u, s_l)
        removed = len(y) - int(keep.sum())
        if stats is not None:
            stats.rounds += 1
            stats.sizes.append(len(y))
            stats.removed.append(removed)
            if removed < len(y) // 6:
                stats.violations += 1
        assert removed >= len(y) // 6, f"1-step round removed {removed} of {len(y)}"
        y, w = y[keep], w[keep]
    return one_center_small(y, w)


def weighted_one_center(points, model: CostModel | str = CostModel.LINEAR,
                        base_size: int = BASE_SIZE,
                        stats: OneCenterStats | None = None) -> tuple[float, float]:
    """Optimal 1-step height and its cost for a point set."""
    model = CostModel.parse(model)
    ps = as_pointset(points)
    if len(ps) == 0:
        raise ValueError("empty point set")
    yc, c = one_center_arrays(ps.y, model.effective_weights(ps.w), base_size, stats)
    return yc, model.report(c)
