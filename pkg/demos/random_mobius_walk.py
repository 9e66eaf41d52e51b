#!/usr/bin/env python3
# The randomized model: iid draws worth -1 or +1 with probability 3/pi^2
# each, 0 otherwise, mimicking mobius on average.  Partial sums then behave
# like a lazy random walk whose variance is (6/pi^2) x, and whose running
# sup of |sum| / sqrt(x loglog x) has almost-sure limit 2 sqrt(3)/pi.
#
# At any finite x the limit is invisible; the point of the model is to see
# what "typical" fluctuations look like so the real Mertens data has a
# backdrop.

import math

import numpy as np

from mforge import CheckpointPolicy, WorkerPool, lil_statistic, simulate_many
from mforge.randmodel import LIL_CONSTANT, P_NONZERO

SEED, TRIALS, X = 7, 50, 10**6

runs = simulate_many(SEED, TRIALS, X, CheckpointPolicy(kind="geometric", ratio=2.0),
                     pool=WorkerPool(4))

print(f"{TRIALS} trajectories to x = {X}, streams keyed off seed {SEED} "
      f"({runs[0].generator}):\n")

finals = np.array([r.mbar[-1] for r in runs], dtype=np.float64)
target_var = P_NONZERO * X
print(f"final sums: mean {finals.mean():8.1f}   (model says ~ 0)")
print(f"            var  {finals.var(ddof=1):12.1f}   (model says ~ {target_var:.1f}, "
      f"ratio {finals.var(ddof=1)/target_var:.3f})")

s = lil_statistic(runs)
print(f"\niterated-logarithm statistic sup |sum| / sqrt(x loglog x), x >= 16:")
print(f"  per-run range [{s.per_run.min():.4f}, {s.per_run.max():.4f}], "
      f"mean {s.aggregate_mean:.4f}")
print(f"  almost-sure limit for reference: 2 sqrt(3)/pi = {LIL_CONSTANT:.7f}")
print("  (finite-x values routinely overshoot it; the limsup is not observable)")

# One trajectory in detail, every power of two
run = runs[0]
print(f"\ntrajectory of trial 0 (seed {run.seed}):")
print(f"{'x':>9} {'sum':>7} {'running lil':>12}")
for i, x in enumerate(run.checkpoints.tolist()):
    if x >= 16 and (x & (x - 1)) == 0 or x == X:
        print(f"{x:>9} {int(run.mbar[i]):>7} {run.lil_running_max[i]:>12.4f}")
