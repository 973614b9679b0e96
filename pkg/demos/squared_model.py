"""
The squared cost model
======================

With cost w (y - h)^2 the optimal partition is the one for weights sqrt(w)
under the linear cost, and the optimal cost is that value squared.
"""
import numpy as np

from stepfit import k_step
from stepfit.generate import generate

pts = generate(500, 4, seed=5, weights="heavy")
sq = k_step(pts, 4, "squared")
lin = k_step(pts.with_weights(np.sqrt(pts.w)), 4, "linear")
print("squared cost:            ", sq.cost)
print("(linear cost on sqrt w)^2:", lin.cost ** 2)
print("same boundaries:", sq.boundaries == lin.boundaries)
print("linear model on the original weights:", k_step(pts, 4).cost)
