"""Prune-and-search solver for (optionally anchored) k-step problems.

Every problem is ``(points, k, left, right)``: fit ``k`` steps, with the first
step pinned to height ``left`` and/or the last to ``right`` when given.  All
costs are linear on the weights stored in the point set (callers apply the
squared-model transform beforehand).

One round: split the points into ``k`` equal buckets, find a bucket that some
optimal solution spans with a single step, and drop points of that bucket.
The remnant is solved exactly.  Dropping points can only lower the optimum,
so the remnant cost is a lower bound; a greedy cover of the *full* input at
that level proves it optimal.  When the proof fails the exact sorted solver
runs on the full input and the event is counted in ``stats.fallbacks``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .anchored import doubly_split
from .feasibility import Cover, cover_cost, exact_solve, greedy_cover, settle
from .one_center import OneCenterStats, Side, classify, one_center_arrays, prune_mask, side_at
from .selection import argmax_point, argmin_point, key_less, select_point

TOL = 1e-9


@dataclass
class RoundRecord:
    depth: int
    n: int
    k: int
    anchors: tuple
    big: int
    bucket: int
    removed: int

    @property
    def required(self) -> int:
        return self.bucket // 6


@dataclass
class SolveStats:
    rounds: list = field(default_factory=list)
    fallbacks: int = 0
    early_exits: int = 0
    stalls: int = 0
    certified: int = 0
    exact_calls: int = 0
    one_center: OneCenterStats = field(default_factory=OneCenterStats)

    @property
    def violations(self) -> int:
        return sum(r.removed < r.required for r in self.rounds) + self.one_center.violations

    def summary(self) -> dict:
        top = [r for r in self.rounds if r.depth == 0]
        return {
            "rounds": len(top),
            "pruned_per_round": [r.removed for r in top],
            "big_partitions": [r.big for r in top],
            "nested_rounds": len(self.rounds) - len(top),
            "one_center_rounds": self.one_center.rounds,
            "fallbacks": self.fallbacks,
            "early_exits": self.early_exits,
            "stalls": self.stalls,
            "violations": self.violations,
        }


def bucket_labels(ps, k: int, method: str = "introselect") -> np.ndarray:
    """Bucket index per point for k contiguous buckets, larger buckets first."""
    n = len(ps)
    q, r = divmod(n, k)
    edges = np.cumsum([q + (1 if h < r else 0) for h in range(k)])[:-1]
    if ps.is_sorted():
        return np.searchsorted(edges, np.arange(n), side="right")
    labels = np.zeros(n, dtype=np.int64)
    for e in edges:
        if e >= n:
            continue
        p = select_point(ps.x, ps.y, ps.ids, int(e), method)
        labels += ~key_less(ps.x, ps.y, ps.ids, ps.x[p], ps.y[p], ps.ids[p])
    return labels


class _Optimal(Exception):
    def __init__(self, cost: float):
        self.cost = cost


class Solver:
    def __init__(self, base_size: int | None = None, aux_base: int | None = None,
                 method: str = "introselect", tol: float = TOL, stats: SolveStats | None = None):
        self.base_size = base_size
        self.aux_base = aux_base
        self.method = method
        self.tol = tol
        self.stats = stats if stats is not None else SolveStats()
        self._depth = 0

    def base(self, k: int) -> int:
        c = self.base_size if self.base_size is not None else max(32, 4 * k)
        if self._depth == 0:
            return c
        # subproblems met inside a round: exact by default, recursive above aux_base
        return max(c, self.aux_base) if self.aux_base is not None else np.inf

    # -- entry point --------------------------------------------------------

    def solve(self, ps, k: int, left: float | None = None, right: float | None = None) -> Cover:
        n = len(ps)
        anchors = (left is not None) + (right is not None)
        if k < 1 or k < anchors:
            raise ValueError(f"{k} steps cannot carry {anchors} anchors")
        flags = (left is not None, right is not None)
        if n == 0:
            h = left if left is not None else (right if right is not None else 0.0)
            c = Cover([np.empty(0, dtype=np.int64)], [h], 0.0, flags)
            return c.padded(k)
        if k == 1:
            if anchors == 2:
                raise ValueError("a single step cannot be anchored at both ends")
            h = left if left is not None else right
            c = Cover([np.arange(n)], [h], anchored=flags)
            if h is None:
                c.heights[0], c.cost = one_center_arrays(ps.y, ps.w, stats=self.stats.one_center,
                                                         method=self.method)
            else:
                c.cost = cover_cost(ps, c)
            return c
        if n <= self.base(k) or k - anchors >= n:
            self.stats.exact_calls += 1
            return exact_solve(ps, k, left, right)
        if k == 2 and anchors == 2:
            mask, cost, _, _ = doubly_split(ps, left, right, method=self.method)
            return Cover([np.flatnonzero(mask), np.flatnonzero(~mask)], [left, right], cost, flags)
        self._depth += 1
        try:
            cost, upper = self._prune_and_search(ps, k, left, right)
        finally:
            self._depth -= 1
        if upper:
            # an early exit pins the optimum to (cost (1 - tol), cost]; close that bracket
            self.stats.exact_calls += 1
            return exact_solve(ps, k, left, right, bracket=(cost * (1.0 - self.tol), cost))
        return self._certify(ps, cost, k, left, right)

    def _certify(self, ps, D: float, k, left, right) -> Cover:
        cov = greedy_cover(ps, D, k, left, right, self.method)
        if cov is None:
            self.stats.fallbacks += 1
            self.stats.exact_calls += 1
            return exact_solve(ps, k, left, right)
        self.stats.certified += 1
        return settle(ps, cov)

    def _prune_and_search(self, ps, k, left, right) -> float:
        alive = np.arange(len(ps))
        self._depth -= 1
        base = self.base(k)
        self._depth += 1
        while len(alive) > base:
            sub = ps.take(alive)
            try:
                keep = self._round(sub, k, left, right)
            except _Optimal as opt:
                self.stats.early_exits += 1
                return opt.cost, True
            if keep is None:
                self.stats.stalls += 1
                break
            alive = alive[keep]
        self.stats.exact_calls += 1
        return exact_solve(ps.take(alive), k, left, right).cost, False

    # -- one round ----------------------------------------------------------

    def _round(self, sub, k, left, right):
        labels = bucket_labels(sub, k, self.method)
        j = self._find_big(sub, labels, k, left, right)
        keep = self._prune_big(sub, labels, j, k, left, right)
        bucket = int(np.count_nonzero(labels == j))
        removed = len(sub) - int(keep.sum())
        self.stats.rounds.append(RoundRecord(self._depth - 1, len(sub), k,
                                             (left is not None, right is not None),
                                             j, bucket, removed))
        if removed == 0:
            return None
        return keep

    def _alone(self, sub, idx, h, k, left, right) -> float:
        if h == 0 and left is not None:
            return float((sub.w[idx] * np.abs(sub.y[idx] - left)).max())
        if h == k - 1 and right is not None:
            return float((sub.w[idx] * np.abs(sub.y[idx] - right)).max())
        return one_center_arrays(sub.y[idx], sub.w[idx], stats=self.stats.one_center,
                                 method=self.method)[1]

    def _below_optimum(self, sub, D, k, left, right) -> bool:
        """True when D <= optimal cost (up to the tolerance)."""
        if D <= 0.0:
            return True
        return greedy_cover(sub, D * (1.0 - self.tol), k, left, right, self.method) is None

    def _find_big(self, sub, labels, k, left, right) -> int:
        """Index of a bucket spanned by one step of some optimal solution.

        Let D_i be the optimum of the first i buckets with i steps.  The
        greedy cover at the optimum reaches past bucket i exactly when
        D_i <= D*, so any i where that predicate switches from false
        (at i-1) to true (at i) marks a bucket covered by greedy step i.
        The predicate holds at i = k, which makes the binary search total.
        """
        first = np.flatnonzero(labels == 0)
        last = np.flatnonzero(labels == k - 1)
        d_first = self._alone(sub, first, 0, k, left, right)
        d_last = self._alone(sub, last, k - 1, k, left, right)
        if k == 2:
            # a split left of the bucket boundary costs at least d_last, right of it d_first
            if d_first == d_last:
                raise _Optimal(d_first)
            return 0 if d_first < d_last else 1
        if self._below_optimum(sub, d_first, k, left, right):
            return 0
        if self._below_optimum(sub, d_last, k, left, right):
            return k - 1
        lo, hi = 1, k
        while hi - lo > 1:
            mid = (lo + hi) // 2
            prefix = np.flatnonzero(labels < mid)
            d_mid = self.solve(sub.take(prefix), mid, left, None).cost
            if self._below_optimum(sub, d_mid, k, left, right):
                hi = mid
            else:
                lo = mid
        return hi - 1

    def _prune_big(self, sub, labels, j, k, left, right, early_exit: bool = True) -> np.ndarray:
        pj = np.flatnonzero(labels == j)
        keep = np.ones(len(sub), dtype=bool)
        fixed = left if (j == 0 and left is not None) else (
            right if (j == k - 1 and right is not None) else None)
        if fixed is not None:
            # the step is pinned: only its worst point and its inner end matter
            c = sub.w[pj] * np.abs(sub.y[pj] - fixed)
            crit = pj[c == c.max()]
            crit = crit[[int(np.argmin(sub.ids[crit]))]]
            keep[pj] = False
            keep[crit] = True
            if k > 2:
                pick = argmax_point if j == 0 else argmin_point
                keep[pj[pick(sub.x[pj], sub.y[pj], sub.ids[pj])]] = True
            return keep
        if len(pj) < 2:
            return keep
        y, w = sub.y[pj], sub.w[pj]
        if early_exit:
            # the bucket's own center is often the optimal level of its step
            h0 = one_center_arrays(y, w, stats=self.stats.one_center, method=self.method)[0]
            cost, _ = self._glue(sub, labels, j, k, h0, left, right)
            if self._below_optimum(sub, cost, k, left, right):
                raise _Optimal(cost)
        cls = classify(y, w, self.method)
        sides = []
        for level in (cls.U, cls.L):
            cost, merged = self._glue(sub, labels, j, k, level, left, right)
            if early_exit and self._below_optimum(sub, cost, k, left, right):
                raise _Optimal(cost)
            sides.append(self._side(sub, merged, pj, level, cost))
        if sides == [Side.BELOW, Side.ABOVE] and cls.L >= cls.U:
            # no height is below U and above L at once; below U <= L means below L
            sides[1] = Side.BELOW
        mask = prune_mask(y, w, cls, *sides)
        keep[pj[~mask]] = False
        return keep

    def _glue(self, sub, labels, j, k, level, left, right):
        """Best cost with bucket j spanned by one step at ``level``, and that step's points."""
        pj = np.flatnonzero(labels == j)
        cost = float((sub.w[pj] * np.abs(sub.y[pj] - level)).max())
        a_idx = np.flatnonzero(labels <= j)
        b_idx = np.flatnonzero(labels >= j)
        # a side only needs its exact optimum when it cannot already meet the running max
        if j > 0:
            a = sub.take(a_idx)
            if greedy_cover(a, cost, j + 1, left, level, self.method) is None:
                cost = max(cost, self.solve(a, j + 1, left, level).cost)
        if j < k - 1:
            b = sub.take(b_idx)
            if greedy_cover(b, cost, k - j, level, right, self.method) is None:
                cost = max(cost, self.solve(b, k - j, level, right).cost)
        parts = [pj]
        if j > 0:
            # mirror so the pinned step becomes the maximal leading one
            cov = greedy_cover(sub.take(a_idx).reflected(), cost, j + 1, level, left, self.method)
            if cov is not None:
                parts.append(a_idx[cov.groups[0]])
        if j < k - 1:
            cov = greedy_cover(sub.take(b_idx), cost, k - j, level, right, self.method)
            if cov is not None:
                parts.append(b_idx[cov.groups[0]])
        return cost, np.unique(np.concatenate(parts))

    def _side(self, sub, merged, pj, level, cost) -> Side:
        y, w = sub.y[merged], sub.w[merged]
        c = w * np.abs(y - level)
        crit = c >= cost - self.tol * (1.0 + cost)
        if not crit.any():
            top = c.max()
            crit = c >= top - self.tol * (1.0 + top)
        above = bool(np.any(crit & (y > level)))
        below = bool(np.any(crit & (y < level)))
        if above != below:
            return Side.ABOVE if above else Side.BELOW
        side, _ = side_at(sub.y[pj], sub.w[pj], level)
        return Side.ABOVE if side is Side.BOTH else side
