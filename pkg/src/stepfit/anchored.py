"""Anchored step-function solvers.

A step function is left- (right-) anchored when its first (last) step has a
prescribed height.  With both ends anchored and two steps the only freedom is
the split position; ``g`` (cost of the left part against ``a``) is
nondecreasing and ``h`` (right part against ``b``) nonincreasing in the split,
so their upper envelope is unimodal and median splits find its minimum.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import CostModel, PointSet, StepFunction, as_pointset, step_function_from_breaks
from .selection import argmin_point, key_less, split_lower

_SMALL = 16


class AnchorSide(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    BOTH = "both"


@dataclass(frozen=True)
class AnchorSpec:
    side: AnchorSide
    left_value: float | None = None
    right_value: float | None = None

    def __post_init__(self):
        need_left = self.side in (AnchorSide.LEFT, AnchorSide.BOTH)
        need_right = self.side in (AnchorSide.RIGHT, AnchorSide.BOTH)
        if need_left != (self.left_value is not None) or need_right != (self.right_value is not None):
            raise ValueError(f"anchor values do not match side {self.side.value}")

    @classmethod
    def left(cls, a: float) -> "AnchorSpec":
        return cls(AnchorSide.LEFT, left_value=a)

    @classmethod
    def right(cls, b: float) -> "AnchorSpec":
        return cls(AnchorSide.RIGHT, right_value=b)


@dataclass(frozen=True)
class SplitSolution:
    boundary: int
    x_bar: float
    cost: float
    left_cost: float
    right_cost: float


def eval_g_h(points, x: float, a: float, b: float,
             model: CostModel | str = CostModel.LINEAR) -> tuple[float, float]:
    """Cost of the points at or left of ``x`` against ``a`` and of the rest against ``b``."""
    model = CostModel.parse(model)
    ps = as_pointset(points)
    d = np.where(ps.x <= x, np.abs(ps.y - a), np.abs(ps.y - b))
    c = d * d * ps.w if model is CostModel.SQUARED else d * ps.w
    left = ps.x <= x
    g = float(c[left].max()) if left.any() else 0.0
    h = float(c[~left].max()) if (~left).any() else 0.0
    return g, h


def doubly_split(ps: PointSet, a: float, b: float, maximal_left: bool = False,
                 method: str = "introselect") -> tuple[np.ndarray, float, float, float]:
    """Optimal split for fixed heights ``a`` (left) and ``b`` (right).

    Linear costs on ``ps.w``.  Returns (mask of the left part, cost, g, h).
    """
    x, y, w, ids = ps.x, ps.y, ps.w, ps.ids
    n = len(ps)
    if n == 0:
        return np.zeros(0, dtype=bool), 0.0, 0.0, 0.0
    ca = w * np.abs(y - a)
    cb = w * np.abs(y - b)
    R = np.arange(n)
    G = H = 0.0
    off = 0
    t = None
    while len(R) > _SMALL:
        mask = split_lower(x[R], y[R], ids[R], (len(R) + 1) // 2, method)
        lf, rt = R[mask], R[~mask]
        gm = max(G, float(ca[lf].max()))
        hm = max(H, float(cb[rt].max())) if len(rt) else H
        if gm == hm:
            t, value = off + len(lf), gm
            break
        if gm < hm:
            G, off, R = gm, off + len(lf), rt
        else:
            H, R = hm, lf
    if t is None:
        o = R[np.lexsort((ids[R], y[R], x[R]))]
        g = np.maximum.accumulate(np.concatenate([[G], ca[o]]))
        h = np.maximum.accumulate(np.concatenate([[H], cb[o][::-1]]))[::-1]
        v = np.maximum(g, h)
        s = int(np.argmin(v))
        t, value = off + s, float(v[s])
    if maximal_left:
        over = np.flatnonzero(ca > value)
        if len(over):
            f = over[argmin_point(x[over], y[over], ids[over])]
            left = key_less(x, y, ids, x[f], y[f], ids[f])
        else:
            left = np.ones(n, dtype=bool)
    else:
        left = split_lower(x, y, ids, t, method)
    g = float(ca[left].max()) if left.any() else 0.0
    h = float(cb[~left].max()) if (~left).any() else 0.0
    return left, max(g, h), g, h


def _split_x(ps: PointSet, left: np.ndarray) -> float:
    if not left.any():
        return -np.inf
    if left.all():
        return np.inf
    return 0.5 * (float(ps.x[left].max()) + float(ps.x[~left].min()))


def doubly_anchored_two_step(points, a: float, b: float,
                             model: CostModel | str = CostModel.LINEAR,
                             maximal_left: bool = False) -> SplitSolution:
    model = CostModel.parse(model)
    ps = as_pointset(points)
    work = ps.with_weights(model.effective_weights(ps.w))
    left, cost, g, h = doubly_split(work, a, b, maximal_left)
    return SplitSolution(int(left.sum()), _split_x(ps, left),
                         model.report(cost), model.report(g), model.report(h))


def _anchored(points, j: int, left: float | None, right: float | None,
              model, **options) -> tuple[StepFunction, float]:
    from .engine import Solver

    model = CostModel.parse(model)
    ps = as_pointset(points)
    if len(ps) == 0:
        raise ValueError("empty point set")
    work = ps.with_weights(model.effective_weights(ps.w))
    cover = Solver(**options).solve(work, j, left, right).padded(j)
    order = ps.order()
    xs = ps.x[order]
    return step_function_from_breaks(xs, cover.counts, cover.heights), model.report(cover.cost)


def left_anchored_two_step(points, a: float, model: CostModel | str = CostModel.LINEAR,
                           **options) -> tuple[StepFunction, float]:
    """Optimal 2-step function whose first step sits at height ``a``."""
    return _anchored(points, 2, a, None, model, **options)


def right_anchored_two_step(points, b: float, model: CostModel | str = CostModel.LINEAR,
                            **options) -> tuple[StepFunction, float]:
    return _anchored(points, 2, None, b, model, **options)


def anchored_j_step(points, anchor: AnchorSpec, j: int,
                    model: CostModel | str = CostModel.LINEAR,
                    **options) -> tuple[StepFunction, float]:
    if j < 1:
        raise ValueError("j must be at least 1")
    if anchor.side is AnchorSide.BOTH and j != 2:
        raise ValueError("doubly anchored solves are only supported for j = 2")
    return _anchored(points, j, anchor.left_value, anchor.right_value, model, **options)
