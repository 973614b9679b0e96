"""Deterministic instance generator.

All randomness comes from raw 64-bit outputs of the PCG64 bit generator
(``numpy.random.PCG64(seed).random_raw``), whose stream is fixed by the
algorithm and the seed.  Every derived value is computed here with plain
arithmetic, so the output does not depend on numpy's distribution code.
"""
from __future__ import annotations

import numpy as np

from .core import PointSet

PROFILES = ("random", "staircase", "adversarial")
WEIGHTS = ("uniform", "heavy")


class Stream:
    """Uniform doubles and bounded integers from raw PCG64 words."""

    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed)

    def raw(self, n: int) -> np.ndarray:
        return np.asarray(self._bits.random_raw(n), dtype=np.uint64)

    def uniform(self, n: int) -> np.ndarray:
        # top 53 bits -> [0, 1)
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def integers(self, n: int, high: int) -> np.ndarray:
        return np.minimum((self.uniform(n) * high).astype(np.int64), high - 1)


def _weights(s: Stream, n: int, kind: str) -> np.ndarray:
    u = s.uniform(n)
    if kind == "uniform":
        return 0.5 + 1.5 * u
    if kind == "heavy":
        # Pareto tail with index 1.5, capped
        return np.minimum((1.0 - u) ** (-1.0 / 1.5), 1e6)
    raise ValueError(f"unknown weight kind {kind!r}")


def generate(n: int, k: int, seed: int, weights: str = "uniform",
             profile: str = "random") -> PointSet:
    """n points with distinct abscissae; ``k`` shapes the staircase profile."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if k < 1:
        raise ValueError("k must be at least 1")
    s = Stream(seed)
    x = np.arange(n, dtype=np.float64) + 0.5 * s.uniform(n)
    if profile == "random":
        y = 100.0 * s.uniform(n)
        w = _weights(s, n, weights)
    elif profile == "staircase":
        levels = 100.0 * s.uniform(k)
        plateau = np.minimum((np.arange(n) * k) // n, k - 1)
        noise = (s.uniform(n) - 0.5) * 0.1
        noise[s.uniform(n) < 0.25] = 0.0
        y = levels[plateau] + noise
        w = _weights(s, n, weights)
    elif profile == "adversarial":
        # few distinct ordinates and weights at the extremes: many ties
        y = s.integers(n, 8).astype(np.float64)
        w = np.array([1e-3, 1.0, 1e3])[s.integers(n, 3)]
        if weights == "heavy":
            w = w * _weights(s, n, "heavy")
    else:
        raise ValueError(f"unknown profile {profile!r}")
    # list points in a scrambled order so file order differs from x-order
    perm = np.argsort(s.uniform(n), kind="stable")
    return PointSet.from_arrays(x[perm], y[perm], w[perm])
