"""Domain types and cost evaluation shared by every solver.

Point sets are stored column-wise in :class:`PointSet` (numpy arrays for
``x``, ``y``, ``w`` and ``ids``).  The x-order used everywhere is the
lexicographic order of ``(x, y, id)``, which is total because ids are unique.

The squared cost model is handled by a weight transform: ``w * d**2`` and
``sqrt(w) * d`` have the same minimizers, so solvers always work with the
linear cost on *effective* weights and square the reported cost at the end.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

TOL = 1e-9


class InstanceError(ValueError):
    """Raised for invalid points, weights or step counts."""


class DomainError(ValueError):
    """Raised when a point lies outside the domain of a step function."""


class CostModel(enum.Enum):
    LINEAR = "linear"
    SQUARED = "squared"

    @classmethod
    def parse(cls, value: "CostModel | str") -> "CostModel":
        if isinstance(value, CostModel):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InstanceError(f"unknown cost model {value!r}") from None

    def effective_weights(self, w: np.ndarray) -> np.ndarray:
        return np.sqrt(w) if self is CostModel.SQUARED else w

    def report(self, linear_cost: float) -> float:
        """Convert a linear cost on effective weights to this model's units."""
        return linear_cost * linear_cost if self is CostModel.SQUARED else linear_cost

    def to_linear(self, cost: float) -> float:
        return math.sqrt(cost) if self is CostModel.SQUARED else cost


def close(a: float, b: float, tol: float = TOL) -> bool:
    return abs(a - b) <= tol * (1.0 + max(abs(a), abs(b)))


@dataclass(frozen=True)
class WeightedPoint:
    x: float
    y: float
    w: float = 1.0
    id: int | None = None   # None: take the position in the enclosing set

    def __post_init__(self):
        for name in ("x", "y", "w"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InstanceError(f"point {self.id}: {name} is not finite ({v!r})")
        if self.w <= 0:
            raise InstanceError(f"point {self.id}: weight must be positive, got {self.w!r}")


@dataclass(frozen=True)
class Segment:
    x_left: float
    x_right: float
    y: float

    def __post_init__(self):
        if self.x_left > self.x_right:
            raise ValueError(f"segment with x_left {self.x_left} > x_right {self.x_right}")

    @property
    def width(self) -> float:
        return self.x_right - self.x_left


@dataclass(frozen=True)
class StepFunction:
    """Contiguous horizontal segments; all half-open except the closed last one."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise ValueError("a step function needs at least one segment")
        for a, b in zip(segs, segs[1:]):
            if a.x_right != b.x_left:
                raise ValueError("segments are not contiguous")

    @property
    def k(self) -> int:
        return len(self.segments)

    @property
    def x_min(self) -> float:
        return self.segments[0].x_left

    @property
    def x_max(self) -> float:
        return self.segments[-1].x_right

    def segment_index(self, x) -> np.ndarray:
        """Index of the segment whose interval contains each abscissa."""
        x = np.asarray(x, dtype=float)
        if np.any((x < self.x_min) | (x > self.x_max)):
            raise DomainError(f"abscissa outside [{self.x_min}, {self.x_max}]")
        rights = np.array([s.x_right for s in self.segments[:-1]])
        return np.searchsorted(rights, x, side="right")

    def heights(self) -> np.ndarray:
        return np.array([s.y for s in self.segments])

    def __call__(self, x):
        return self.heights()[self.segment_index(x)]


@dataclass(frozen=True)
class PartitionScheme:
    """k contiguous buckets given by k-1 prefix counts in x-order."""

    boundaries: tuple[int, ...]
    n: int

    @property
    def k(self) -> int:
        return len(self.boundaries) + 1

    @property
    def edges(self) -> tuple[int, ...]:
        return (0, *self.boundaries, self.n)

    @property
    def sizes(self) -> tuple[int, ...]:
        e = self.edges
        return tuple(e[i + 1] - e[i] for i in range(len(e) - 1))


@dataclass(frozen=True)
class PointSet:
    """Immutable column store of weighted points."""

    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    ids: np.ndarray = field(default=None)

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=float)
        y = np.ascontiguousarray(self.y, dtype=float)
        w = np.ascontiguousarray(self.w, dtype=float)
        ids = np.arange(len(x)) if self.ids is None else np.ascontiguousarray(self.ids, dtype=np.int64)
        if not (len(x) == len(y) == len(w) == len(ids)):
            raise InstanceError("coordinate arrays differ in length")
        for arr in (x, y, w, ids):
            arr.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "ids", ids)

    @classmethod
    def from_arrays(cls, x, y, w=None, ids=None, validate: bool = True) -> "PointSet":
        x = np.asarray(x, dtype=float)
        w = np.ones_like(x) if w is None else w
        ps = cls(x, y, w, ids)
        if validate:
            ps.validate()
        return ps

    @classmethod
    def from_points(cls, points: Iterable[WeightedPoint]) -> "PointSet":
        pts = list(points)
        ids = [i if p.id is None else p.id for i, p in enumerate(pts)]
        return cls.from_arrays([p.x for p in pts], [p.y for p in pts], [p.w for p in pts], ids)

    def validate(self) -> None:
        for name in ("x", "y", "w"):
            arr = getattr(self, name)
            bad = np.flatnonzero(~np.isfinite(arr))
            if bad.size:
                raise InstanceError(f"point {int(self.ids[bad[0]])}: {name} is not finite")
        bad = np.flatnonzero(self.w <= 0)
        if bad.size:
            raise InstanceError(
                f"point {int(self.ids[bad[0]])}: weight must be positive, got {self.w[bad[0]]!r}"
            )
        if len(np.unique(self.ids)) != len(self.ids):
            raise InstanceError("point ids are not unique")

    def __len__(self) -> int:
        return len(self.x)

    def take(self, idx) -> "PointSet":
        return PointSet(self.x[idx], self.y[idx], self.w[idx], self.ids[idx])

    def with_weights(self, w) -> "PointSet":
        return PointSet(self.x, self.y, w, self.ids)

    def points(self) -> list[WeightedPoint]:
        return [
            WeightedPoint(float(a), float(b), float(c), int(d))
            for a, b, c, d in zip(self.x, self.y, self.w, self.ids)
        ]

    def order(self) -> np.ndarray:
        """Permutation sorting the points by (x, y, id)."""
        if self.is_sorted():
            return np.arange(len(self.x))
        return np.lexsort((self.ids, self.y, self.x))

    def is_sorted(self) -> bool:
        """Already in (x, y, id) order?  One linear pass."""
        dx = np.diff(self.x)
        if (dx > 0).all():
            return True
        if (dx < 0).any():
            return False
        tie = np.flatnonzero(dx == 0)
        dy = self.y[tie + 1] - self.y[tie]
        if (dy < 0).any():
            return False
        same = tie[dy == 0]
        return bool((self.ids[same + 1] > self.ids[same]).all())

    def reflected(self) -> "PointSet":
        """Mirror image under x -> -x (ids negated so the tie order reverses too)."""
        return PointSet(-self.x, self.y, self.w, -self.ids)


def as_pointset(points) -> PointSet:
    if isinstance(points, PointSet):
        return points
    pts = list(points)
    if pts and not isinstance(pts[0], WeightedPoint):
        pts = [WeightedPoint(*p, id=i) if len(p) < 4 else WeightedPoint(*p) for i, p in enumerate(pts)]
    return PointSet.from_points(pts)


def point_cost(p: WeightedPoint, y: float, model: CostModel | str = CostModel.LINEAR) -> float:
    model = CostModel.parse(model)
    d = abs(p.y - y)
    return d * d * p.w if model is CostModel.SQUARED else d * p.w


def costs_at(ps: PointSet, heights, model: CostModel | str = CostModel.LINEAR) -> np.ndarray:
    """Vectorized point costs against per-point (or scalar) heights."""
    model = CostModel.parse(model)
    d = np.abs(ps.y - heights)
    return d * d * ps.w if model is CostModel.SQUARED else d * ps.w


def set_cost(points, F: StepFunction, model: CostModel | str = CostModel.LINEAR) -> float:
    ps = as_pointset(points)
    if len(ps) == 0:
        return 0.0
    heights = F.heights()[F.segment_index(ps.x)]
    return float(costs_at(ps, heights, model).max())


def critical_points(points, F: StepFunction, model: CostModel | str = CostModel.LINEAR,
                    tol: float = TOL) -> list[WeightedPoint]:
    ps = as_pointset(points)
    if len(ps) == 0:
        return []
    c = costs_at(ps, F.heights()[F.segment_index(ps.x)], model)
    top = c.max()
    return ps.take(np.flatnonzero(c >= top - tol * (1.0 + top))).points()


def linear_bisectors(py: float, pw: float, qy: float, qw: float) -> tuple[float, float]:
    """Heights where the cost lines ``pw|y-py|`` and ``qw|y-qy|`` cross, as (lower, upper).

    With equal weights the single crossing is returned twice.
    """
    if py == qy:
        if pw == qw:
            raise InstanceError("identical (y, w) pair: drop one point instead")
        return py, py
    inner = (pw * py + qw * qy) / (pw + qw)
    if pw == qw:
        return inner, inner
    outer = (pw * py - qw * qy) / (pw - qw)
    return (inner, outer) if inner <= outer else (outer, inner)


def bisectors(p: WeightedPoint, q: WeightedPoint,
              model: CostModel | str = CostModel.LINEAR) -> tuple[float, float]:
    model = CostModel.parse(model)
    if model is CostModel.SQUARED:
        return linear_bisectors(p.y, math.sqrt(p.w), q.y, math.sqrt(q.w))
    return linear_bisectors(p.y, p.w, q.y, q.w)


def step_function_from_breaks(xs_sorted: np.ndarray, counts: Sequence[int],
                              heights: Sequence[float]) -> StepFunction:
    """Build a step function over sorted abscissae from bucket sizes and heights.

    Breaks sit at the midpoint of the last abscissa of one bucket and the first
    of the next; empty buckets become zero-width segments.
    """
    n = len(xs_sorted)
    lo, hi = float(xs_sorted[0]), float(xs_sorted[-1])
    edges = np.concatenate([[0], np.cumsum(counts)]).astype(int)
    cuts = []
    for e in edges[1:-1]:
        if e <= 0:
            cuts.append(lo)
        elif e >= n:
            cuts.append(hi)
        else:
            cuts.append(0.5 * (float(xs_sorted[e - 1]) + float(xs_sorted[e])))
    xs = [lo, *cuts, hi]
    return StepFunction(tuple(Segment(xs[i], xs[i + 1], float(h)) for i, h in enumerate(heights)))
