"""
Anchored step functions
=======================

Fits where the first and/or last step is pinned to a given height.  These
are the pieces glued together around a bucket spanned by one step.
"""
from stepfit import AnchorSide, AnchorSpec, anchored_j_step, doubly_anchored_two_step
from stepfit import eval_g_h, left_anchored_two_step, right_anchored_two_step
from stepfit.generate import generate
from stepfit.oracle import oracle_anchored

pts = generate(40, 3, seed=3)
a, b = 20.0, 80.0

split = doubly_anchored_two_step(pts, a, b)
print(f"doubly anchored at ({a}, {b}): split after {split.boundary} points at x = {split.x_bar:.3f}")
print("  left / right costs:", split.left_cost, split.right_cost)
print("  same from eval_g_h:", eval_g_h(pts, split.x_bar, a, b))

F, cost = left_anchored_two_step(pts, a)
print(f"left anchored at {a}: cost {cost:.5f}, free height {F.segments[1].y:.4f}")
F, cost = right_anchored_two_step(pts, b)
print(f"right anchored at {b}: cost {cost:.5f}, free height {F.segments[0].y:.4f}")

for j in range(1, 5):
    spec = AnchorSpec.left(a)
    got = anchored_j_step(pts, spec, j)[1]
    print(f"left anchored {j}-step: {got:.6f}  oracle {oracle_anchored(pts, spec, j)[1]:.6f}")
print("both ends, 2 steps:", anchored_j_step(pts, AnchorSpec(AnchorSide.BOTH, a, b), 2)[1])
