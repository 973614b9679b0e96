"""D-feasibility testing and the exact sorted solver.

All functions here take linear costs on effective weights.  A *cover* is the
solver-internal solution format: a list of index arrays (one per step, in
x-order, possibly empty) plus one height per step.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import PointSet
from .one_center import pair_cost
from .selection import argmin_point, split_lower

SLACK = 1e-14   # absorbs rounding in the y +- D/w bounds
_SMALL = 48


@dataclass
class Cover:
    groups: list
    heights: list
    cost: float = float("nan")
    anchored: tuple = (False, False)

    @property
    def counts(self) -> list[int]:
        return [len(g) for g in self.groups]

    def padded(self, k: int) -> "Cover":
        """Pad to exactly k steps with empty groups carrying neighbouring heights."""
        groups, heights = list(self.groups), list(self.heights)
        insert_at = len(groups) - 1 if self.anchored[1] else len(groups)
        while len(groups) < k:
            h = heights[insert_at - 1] if insert_at > 0 else (heights[0] if heights else 0.0)
            groups.insert(insert_at, np.empty(0, dtype=np.int64))
            heights.insert(insert_at, h)
        return Cover(groups, heights, self.cost, self.anchored)


def _fits(lo: float, hi: float) -> bool:
    return lo <= hi + SLACK * (1.0 + abs(lo) + abs(hi))


def _within(c: np.ndarray, D: float) -> np.ndarray:
    return c <= D + SLACK * (1.0 + D)


def _free_step(ps: PointSet, R: np.ndarray, D: float, method: str):
    """Longest step starting at the leftmost point of R (unsorted, linear time).

    Returns (consumed indices, remaining indices, height).
    """
    x, y, w, ids = ps.x, ps.y, ps.w, ps.ids
    lo, hi = -np.inf, np.inf
    consumed, after = [], []
    while len(R) > _SMALL:
        mask = split_lower(x[R], y[R], ids[R], (len(R) + 1) // 2, method)
        left, right = R[mask], R[~mask]
        r = D / w[left]
        l1 = max(lo, float((y[left] - r).max()))
        h1 = min(hi, float((y[left] + r).min()))
        if _fits(l1, h1):
            lo, hi = l1, h1
            consumed.append(left)
            R = right
        else:
            after.append(right)
            R = left
    o = R[np.lexsort((ids[R], y[R], x[R]))]
    r = D / w[o]
    lows = np.maximum.accumulate(np.maximum(lo, y[o] - r))
    highs = np.minimum.accumulate(np.minimum(hi, y[o] + r))
    ok = lows <= highs + SLACK * (1.0 + np.abs(lows) + np.abs(highs))
    f = len(o) if ok.all() else int(np.argmin(ok))
    if f > 0:
        lo, hi = float(lows[f - 1]), float(highs[f - 1])
        consumed.append(o[:f])
    rest = np.concatenate([o[f:], *after]) if after or f < len(o) else o[f:]
    group = np.concatenate(consumed) if consumed else np.empty(0, dtype=np.int64)
    if lo > hi:
        lo = hi = 0.5 * (lo + hi)
    return group, rest.astype(np.int64), 0.5 * (lo + hi)


def _anchored_prefix(ps: PointSet, R: np.ndarray, D: float, a: float):
    bad = ~_within(ps.w[R] * np.abs(ps.y[R] - a), D)
    if not bad.any():
        return R, R[:0]
    B = R[bad]
    v = B[argmin_point(ps.x[B], ps.y[B], ps.ids[B])]
    vx, vy, vid = ps.x[v], ps.y[v], ps.ids[v]
    x, y, ids = ps.x[R], ps.y[R], ps.ids[R]
    before = (x < vx) | ((x == vx) & ((y < vy) | ((y == vy) & (ids < vid))))
    return R[before], R[~before]


def greedy_cover(ps: PointSet, D: float, k: int, left: float | None = None,
                 right: float | None = None, method: str = "introselect") -> Cover | None:
    """Greedy maximal steps at level D; a cover with at most k steps or None.

    Runs in O(k n) without sorting: each step is extended by median splits
    of the remaining points.
    """
    budget = k - (left is not None) - (right is not None)
    if budget < 0:
        raise ValueError("not enough steps for the anchors")
    if ps.is_sorted():
        # same greedy steps by a left-to-right sweep
        s = _Sorted(ps.y, ps.w, np.arange(len(ps), dtype=np.int64))
        return _sorted_cover(s, D, k, left, right)
    R = np.arange(len(ps), dtype=np.int64)
    groups, heights = [], []
    if left is not None:
        g, R = _anchored_prefix(ps, R, D, left)
        groups.append(g)
        heights.append(left)
    while len(R) and budget > 0:
        g, R, h = _free_step(ps, R, D, method)
        groups.append(g)
        heights.append(h)
        budget -= 1
    if right is not None:
        if len(R) and not _within(ps.w[R] * np.abs(ps.y[R] - right), D).all():
            return None
        groups.append(R)
        heights.append(right)
        R = R[:0]
    if len(R):
        return None
    return Cover(groups, heights, anchored=(left is not None, right is not None))


def cover_cost(ps: PointSet, cover: Cover) -> float:
    c = 0.0
    for g, h in zip(cover.groups, cover.heights):
        if len(g):
            c = max(c, float((ps.w[g] * np.abs(ps.y[g] - h)).max()))
    return c


def settle(ps: PointSet, cover: Cover) -> Cover:
    """Exact cost of a cover swept at (within rounding of) its own optimum.

    At that level the binding step's admissible interval has shrunk to its
    1-center, so the closed-form cost of the critical pair at the step's
    height is exact; other steps give lower bounds below it.  Linear time.
    """
    first = 1 if cover.anchored[0] else 0
    last = len(cover.heights) - (1 if cover.anchored[1] else 0)
    cost = 0.0
    for i, (g, h) in enumerate(zip(cover.groups, cover.heights)):
        if not len(g):
            continue
        y, w = ps.y[g], ps.w[g]
        if first <= i < last:
            c = pair_cost(y, w, h)
        else:
            c = float((w * np.abs(y - h)).max())
        cost = max(cost, c)
    out = Cover(cover.groups, list(cover.heights), anchored=cover.anchored)
    out.cost = cost
    return out


@dataclass
class _Sorted:
    y: np.ndarray
    w: np.ndarray
    order: np.ndarray


def _run_end(y, w, D: float, pos: int):
    """End of the longest run from ``pos`` whose admissible intervals share a height.

    Scans doubling windows so a step of length L costs O(L) rather than
    O(n - pos).  Returns (end, lo, hi) for the run's intersection.
    """
    n = len(y)
    lo, hi = -np.inf, np.inf
    win = 64
    while pos < n:
        stop = min(n, pos + win)
        r = D / w[pos:stop]
        lows = np.maximum.accumulate(np.maximum(lo, y[pos:stop] - r))
        highs = np.minimum.accumulate(np.minimum(hi, y[pos:stop] + r))
        ok = lows <= highs + SLACK * (1.0 + np.abs(lows) + np.abs(highs))
        if not ok.all():
            f = int(np.argmin(ok))
            if f:
                lo, hi = lows[f - 1], highs[f - 1]
            return pos + f, lo, hi
        lo, hi = lows[-1], highs[-1]
        pos = stop
        win *= 2
    return n, lo, hi


def _greedy_spans(s: _Sorted, D: float, k: int, left, right):
    """Greedy maximal spans at D; returns (spans, heights, feasible)."""
    n = len(s.y)
    spans, heights = [], []
    pos = 0
    budget = k - (left is not None) - (right is not None)
    if left is not None:
        bad = ~_within(s.w * np.abs(s.y - left), D)
        end = int(np.argmax(bad)) if bad.any() else n
        spans.append((0, end))
        heights.append(left)
        pos = end
    while pos < n and budget > 0:
        end, lo, hi = _run_end(s.y, s.w, D, pos)
        spans.append((pos, end))
        heights.append(0.5 * (lo + hi) if np.isfinite(lo) and np.isfinite(hi) else float(s.y[pos]))
        pos = end
        budget -= 1
    if right is not None:
        if not _within(s.w[pos:] * np.abs(s.y[pos:] - right), D).all():
            return spans, heights, False
        spans.append((pos, n))
        heights.append(right)
        pos = n
    return spans, heights, pos >= n


def _sorted_spans(s: _Sorted, D: float, k: int, left, right):
    spans, heights, ok = _greedy_spans(s, D, k, left, right)
    return (spans, heights) if ok else None


def _next_event(s: _Sorted, spans, left, right) -> float:
    """Smallest D at which the failed greedy run could change.

    Below it every span keeps its end (extending by the next point costs
    more) and the leftover still misses the right anchor, so every such D
    is infeasible too.
    """
    n = len(s.y)
    best = np.inf
    for i, (a, b) in enumerate(spans):
        if b >= n:
            continue
        wb, yb = s.w[b], s.y[b]
        if i == 0 and left is not None:
            c = wb * abs(yb - left)
        else:
            w, y = s.w[a:b], s.y[a:b]
            c = float((w * wb * np.abs(y - yb) / (w + wb)).max()) if b > a else 0.0
        best = min(best, c)
    if right is not None:
        pos = spans[-1][1] if spans else 0
        if pos < n:
            best = min(best, float((s.w[pos:] * np.abs(s.y[pos:] - right)).max()))
    return best


def _spans_cost(s: _Sorted, spans, heights) -> float:
    lengths = [b - a for a, b in spans]
    h = np.repeat(np.asarray(heights, dtype=float), lengths)
    return float((s.w * np.abs(s.y - h)).max()) if len(h) else 0.0


def _to_cover(s: _Sorted, spans, heights, left, right) -> Cover:
    return Cover([s.order[a:b] for a, b in spans], list(heights),
                 anchored=(left is not None, right is not None))


def _sorted_cover(s: _Sorted, D: float, k: int, left, right):
    res = _sorted_spans(s, D, k, left, right)
    return None if res is None else _to_cover(s, *res, left, right)


def exact_solve(ps: PointSet, k: int, left: float | None = None,
                right: float | None = None, stats: dict | None = None,
                bracket: tuple[float, float] | None = None) -> Cover:
    """Exact optimum by sorting once and bisecting D with greedy covers.

    The cover at the feasible end of the bracket costs at most hi and more
    than lo, so it is optimal up to the bracket width.
    ``bracket`` = (infeasible lower bound, feasible upper bound) narrows the
    search when such bounds are already known.
    """
    order = ps.order()
    s = _Sorted(ps.y[order], ps.w[order], order)
    cov = _sorted_cover(s, 0.0, k, left, right)
    if cov is not None:
        return settle(ps, cov)
    best_res = _sorted_spans(s, bracket[1], k, left, right) if bracket else None
    if best_res is None:
        bracket = None
        best_res = _sorted_spans(s, np.inf, k, left, right)
    lo, hi = (bracket[0], _spans_cost(s, *best_res)) if bracket else (0.0, _spans_cost(s, *best_res))
    best_cost = hi
    for _ in range(400):
        if hi - lo <= 1e-15 * hi:
            break
        mid = np.sqrt(lo * hi) if lo > 0 and hi > 4 * lo else 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        spans, heights, ok = _greedy_spans(s, mid, k, left, right)
        if ok:
            # the probe's own cover is attained, so it can pull hi below mid
            c = _spans_cost(s, spans, heights)
            hi = min(mid, c)
            if c < best_cost:
                best_cost, best_res = c, (spans, heights)
        else:
            # the failed sweep cannot change below its next event, so lo moves there
            ev = _next_event(s, spans, left, right)
            if ev >= hi:
                break   # nothing below hi is feasible
            lo = max(mid, ev)
            if ev > mid:
                spans, heights, ok = _greedy_spans(s, ev, k, left, right)
                if ok:
                    # the event itself is feasible, so it is the optimum
                    c = _spans_cost(s, spans, heights)
                    hi = min(ev, c)
                    if c < best_cost:
                        best_cost, best_res = c, (spans, heights)
    best = settle(ps, _to_cover(s, *best_res, left, right))
    if stats is not None:
        stats["exact_calls"] = stats.get("exact_calls", 0) + 1
    return best
