"""Public k-step fitting API.

``k_step`` is the entry point; the other functions expose single pieces of
the prune-and-search loop (bucketing, the feasibility sweep, choosing a big
bucket, pruning it) so they can be inspected and tested one at a time.
Bucket indices are 0-based.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import CostModel, PartitionScheme, PointSet, StepFunction, as_pointset, step_function_from_breaks
from .engine import Solver, SolveStats, _Optimal, bucket_labels
from .feasibility import Cover, greedy_cover


@dataclass(frozen=True)
class FeasibilityWitness:
    feasible: bool
    steps: StepFunction | None = None

    def __bool__(self) -> bool:
        return self.feasible


@dataclass
class Diagnostics:
    rounds: int = 0
    pruned_per_round: list = field(default_factory=list)
    big_partitions: list = field(default_factory=list)
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "pruned_per_round": list(self.pruned_per_round),
            "big_partitions": list(self.big_partitions),
            "wall_time": self.wall_time,
            **self.extra,
        }


@dataclass(frozen=True)
class FitReport:
    cost: float
    fit: StepFunction
    boundaries: tuple[int, ...]   # k+1 prefix counts in (x, y, id) order
    diagnostics: Diagnostics
    stats: SolveStats = field(repr=False, compare=False, default=None)

    @property
    def k(self) -> int:
        return self.fit.k


def _work(points, model) -> tuple[PointSet, PointSet, CostModel]:
    model = CostModel.parse(model)
    ps = as_pointset(points)
    return ps, ps.with_weights(model.effective_weights(ps.w)), model


def _labels(ps: PointSet, scheme: PartitionScheme) -> np.ndarray:
    if scheme.n != len(ps):
        raise ValueError(f"scheme covers {scheme.n} points, set has {len(ps)}")
    rank = np.empty(len(ps), dtype=np.int64)
    rank[ps.order()] = np.arange(len(ps))
    return np.searchsorted(np.asarray(scheme.boundaries, dtype=np.int64), rank, side="right")


def _to_step_function(ps: PointSet, cover: Cover, k: int) -> tuple[StepFunction, tuple[int, ...]]:
    cover = cover.padded(k)
    xs = ps.x[ps.order()]
    counts = cover.counts
    edges = tuple(int(e) for e in np.concatenate([[0], np.cumsum(counts)]))
    return step_function_from_breaks(xs, counts, cover.heights), edges


def equal_size_partition(points, k: int) -> PartitionScheme:
    """k contiguous buckets whose sizes differ by at most one, larger first."""
    ps = as_pointset(points)
    n = len(ps)
    if not 1 <= k <= max(n, 1):
        raise ValueError(f"k={k} outside [1, {n}]")
    labels = bucket_labels(ps, k)
    counts = np.bincount(labels, minlength=k)
    return PartitionScheme(tuple(int(c) for c in np.cumsum(counts)[:-1]), n)


def feasibility_test(points, D: float, k: int,
                     model: CostModel | str = CostModel.LINEAR) -> FeasibilityWitness:
    """Is there a k-step function of cost at most D?  Greedy maximal steps, O(kn)."""
    if D < 0:
        raise ValueError("D must be nonnegative")
    if k < 1:
        raise ValueError("k must be at least 1")
    ps, work, model = _work(points, model)
    if len(ps) == 0:
        return FeasibilityWitness(True, None)
    cover = greedy_cover(work, model.to_linear(D), k)
    if cover is None:
        return FeasibilityWitness(False)
    return FeasibilityWitness(True, _to_step_function(ps, cover, k)[0])


def find_big_partition(points, scheme: PartitionScheme, k: int,
                       model: CostModel | str = CostModel.LINEAR) -> int:
    """Index of a bucket that one step of some optimal solution spans."""
    ps, work, model = _work(points, model)
    if scheme.k != k:
        raise ValueError(f"scheme has {scheme.k} buckets, expected {k}")
    if k == 1:
        return 0
    try:
        return Solver()._find_big(work, _labels(ps, scheme), k, None, None)
    except _Optimal:
        # the bucket boundary itself is an optimal split, so bucket 0 is spanned
        return 0


def prune_big(points, scheme: PartitionScheme, j: int, k: int,
              model: CostModel | str = CostModel.LINEAR,
              stats: SolveStats | None = None) -> PointSet:
    """Drop at least a sixth of bucket j's points (one round of the main loop)."""
    ps, work, model = _work(points, model)
    if not 0 <= j < k:
        raise IndexError(f"bucket {j} out of range for k={k}")
    solver = Solver(stats=stats)
    keep = solver._prune_big(work, _labels(ps, scheme), j, k, None, None, early_exit=False)
    return ps.take(np.flatnonzero(keep))


def k_step(points, k: int, model: CostModel | str = CostModel.LINEAR,
           **options) -> FitReport:
    """Optimal k-step function under the weighted minimax cost.

    ``options`` go to :class:`~stepfit.engine.Solver` (``base_size``,
    ``aux_base``, ``method``).  k above the number of points is clamped for
    the solve and the fit is padded with zero-width steps.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    ps, work, model = _work(points, model)
    if len(ps) == 0:
        raise ValueError("empty point set")
    t0 = time.perf_counter()
    stats = SolveStats()
    # sort once; subsets taken in index order stay sorted, so later sorts are linear checks
    order = ps.order()
    ps, work = ps.take(order), work.take(order)
    k_eff = min(k, len(ps))
    cover = Solver(stats=stats, **options).solve(work, k_eff)
    D = cover.cost
    # report heights as midpoints of the admissible intervals at the optimum
    final = greedy_cover(work, D, k_eff)
    if final is None:
        final = cover
    fit, edges = _to_step_function(ps, final, k)
    wall = time.perf_counter() - t0
    s = stats.summary()
    diag = Diagnostics(
        rounds=s.pop("rounds"),
        pruned_per_round=s.pop("pruned_per_round"),
        big_partitions=s.pop("big_partitions"),
        wall_time=wall,
        extra=s,
    )
    return FitReport(model.report(D), fit, edges, diag, stats)
