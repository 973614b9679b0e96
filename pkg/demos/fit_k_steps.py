"""
Fitting a k-step function
=========================

A noisy staircase, fitted with 1..6 steps.  The cost drops sharply once k
reaches the number of plateaus.
"""
import numpy as np

from stepfit import k_step, set_cost
from stepfit.generate import generate
from stepfit.oracle import oracle_k_step

pts = generate(3000, 4, seed=7, profile="staircase")

for k in range(1, 7):
    r = k_step(pts, k)
    print(f"k={k}  cost={r.cost:10.5f}  rounds={r.diagnostics.rounds}")

# the 4-step fit: one segment per plateau
r = k_step(pts, 4)
for s in r.fit.segments:
    print(f"  [{s.x_left:8.2f}, {s.x_right:8.2f}]  y = {s.y:.4f}")
print("bucket edges (prefix counts):", r.boundaries)
print("realized cost of the fit:", set_cost(pts, r.fit))

# cross-check on a smaller sample with the dynamic program
small = generate(150, 4, seed=7, profile="staircase")
print("engine vs oracle:", k_step(small, 4).cost, oracle_k_step(small, 4)[1])
print("diagnostics:", {k: v for k, v in r.diagnostics.as_dict().items() if not isinstance(v, list)})
