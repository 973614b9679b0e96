"""
Weighted 1-center on a line
===========================

The best single height for a set of weighted ordinates, found by pruning
pairs of points whose bisectors rule one member out.
"""
import numpy as np

from stepfit import Side, WeightedPoint, bisectors, classify_pairs, prune_one_sixth, weighted_one_center
from stepfit.oracle import oracle_one_center

rng = np.random.default_rng(1)
n = 2000
pts = [WeightedPoint(float(i), float(y), float(w))
       for i, (y, w) in enumerate(zip(rng.normal(0, 5, n), rng.uniform(0.2, 3.0, n)))]

# two points: their cost lines cross at a lower and an upper bisector
p, q = WeightedPoint(0, 0.0, 4.0), WeightedPoint(1, 10.0, 1.0)
print("bisectors of p, q:", bisectors(p, q))

# one pruning round: pair the points, test the two candidate heights U and L
cls = classify_pairs(pts)
print(f"{cls.m} pairs, U = {cls.U:.4f}, L = {cls.L:.4f}")
h, cost = weighted_one_center(pts)
side_u = Side.ABOVE if h > cls.U else Side.BELOW
side_l = Side.ABOVE if h > cls.L else Side.BELOW
kept = prune_one_sixth(pts, cls, side_u, side_l)
print(f"one round keeps {len(kept)} of {n} points")

# the full solve against the brute-force oracle
print(f"center {h:.6f}, cost {cost:.6f}")
print("oracle cost:", oracle_one_center(pts)[1])
