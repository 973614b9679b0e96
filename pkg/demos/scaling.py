"""
Running time as n doubles
=========================

A small version of the scaling benchmark: median time of k_step over a few
seeds at each size.
"""
import statistics
import time

from stepfit import k_step
from stepfit.generate import generate

k_step(generate(1000, 3, 0), 3)   # warm-up

# time depends on how many rounds run before an early exit, so ratios are noisy
prev = None
for n in (25_000, 50_000, 100_000):
    times, rounds = [], []
    for seed in range(1, 4):
        pts = generate(n, 3, seed)
        t0 = time.perf_counter()
        r = k_step(pts, 3)
        times.append(time.perf_counter() - t0)
        rounds.append(r.diagnostics.rounds)
    med = statistics.median(times)
    ratio = f"{med / prev:.2f}" if prev else "-"
    print(f"n={n:7d}  median {med:.3f}s  ratio {ratio}  rounds per seed {rounds}")
    prev = med
