"""
Feasibility, big buckets and one pruning round
==============================================

The pieces of a single round of the k-step search, shown one at a time.
"""
from stepfit import equal_size_partition, feasibility_test, find_big_partition, k_step, prune_big
from stepfit.generate import generate

k = 3
pts = generate(600, k, seed=11)
D = k_step(pts, k).cost

# a greedy sweep decides whether cost D is reachable with k steps
print("feasible at D*:        ", feasibility_test(pts, D, k).feasible)
print("feasible just below D*:", feasibility_test(pts, D * (1 - 1e-6), k).feasible)
witness = feasibility_test(pts, D, k)
print("witness heights at D*:", [round(s.y, 3) for s in witness.steps.segments])

# split into k equal buckets and find one that some optimal step spans
scheme = equal_size_partition(pts, k)
j = find_big_partition(pts, scheme, k)
print("bucket sizes:", scheme.sizes, " big bucket:", j)

# dropping points of that bucket leaves the optimum alone
reduced = prune_big(pts, scheme, j, k)
print(f"pruned {len(pts) - len(reduced)} points (at least {scheme.sizes[j] // 6} required)")
print("optimum before / after:", D, k_step(reduced, k).cost)
