"""Monte-Carlo model of the Mobius values as iid three-point draws.

Each site draws -1 and +1 with probability 3/pi^2 each and 0 otherwise, so
the trajectory of partial sums mimics the Mertens sum: mean ~ 0, variance
~ 6x/pi^2, and a law-of-the-iterated-logarithm sup statistic whose almost-sure
limit is 2*sqrt(3)/pi (a reference value only; the limsup is not observable
at any finite x).
"""

import math
from dataclasses import dataclass

import numpy as np

from .parallel import WorkerPool
from .summatory import CheckpointPolicy

P_NONZERO = 6.0 / math.pi**2
P_MINUS = 3.0 / math.pi**2

#: Almost-sure limit of sup |Mbar_x| / sqrt(x loglog x): 2*sqrt(3)/pi.
LIL_CONSTANT = 2.0 * math.sqrt(3.0) / math.pi

#: Stream identity recorded in run metadata: counter-based Philox (4x64,
#: 10 rounds) as shipped by numpy, one stream per trial keyed by seed + trial.
GENERATOR_NAME = "numpy-philox4x64-10"

#: The loglog scaling is only positive from here up.
LIL_MIN_X = 16


@dataclass
class ModelRun:
    """One simulated trajectory, reproducible from (generator, seed)."""

    seed: int
    x_max: int
    checkpoints: np.ndarray      # ascending, last = x_max
    mbar: np.ndarray             # partial sums at the checkpoints
    lil_running_max: np.ndarray  # running sup of |mbar|/sqrt(x loglog x), x >= 16
    lil_sup: float               # final running sup over the whole trajectory
    generator: str = GENERATOR_NAME


@dataclass
class LilSummary:
    """Sup statistics across a batch of runs; informational, never asserted."""

    per_run: np.ndarray
    aggregate_sup: float
    aggregate_mean: float
    reference: float = LIL_CONSTANT


_SCALE_CACHE: dict = {}


def _lil_scale(lo: int, hi: int) -> np.ndarray:
    # 1 / sqrt(x loglog x) for x in [lo, hi), zero below the x >= 16 cutoff;
    # identical across trials, so worth caching per block.
    key = (lo, hi)
    if key not in _SCALE_CACHE:
        xs = np.arange(lo, hi, dtype=np.float64)
        out = np.zeros(hi - lo)
        live = xs >= LIL_MIN_X
        out[live] = 1.0 / np.sqrt(xs[live] * np.log(np.log(xs[live])))
        if len(_SCALE_CACHE) > 256:
            _SCALE_CACHE.clear()
        _SCALE_CACHE[key] = out
    return _SCALE_CACHE[key]


def simulate(seed: int, x_max: int, policy: CheckpointPolicy | None = None,
             block: int = 1 << 20) -> ModelRun:
    """Simulate one trajectory of x_max draws, recording at the checkpoints.

    Draw mapping (fixed threshold order, part of the reproducibility
    contract): uniform u < 3/pi^2 -> -1, else u < 6/pi^2 -> +1, else 0.
    """
    if x_max < LIL_MIN_X:
        raise ValueError(f"x_max must be >= {LIL_MIN_X}, got {x_max}")
    policy = policy or CheckpointPolicy()
    cps = policy.checkpoints(x_max)
    rng = np.random.Generator(np.random.Philox(seed))

    mbar_cp = np.zeros(len(cps), dtype=np.int64)
    lil_cp = np.zeros(len(cps), dtype=np.float64)
    total = 0
    run_max = 0.0
    for lo in range(1, x_max + 1, block):
        hi = min(lo + block, x_max + 1)
        u = rng.random(hi - lo)
        steps = np.where(u < P_MINUS, -1, np.where(u < P_NONZERO, 1, 0))
        traj = total + np.cumsum(steps)
        scaled = np.abs(traj).astype(np.float64) * _lil_scale(lo, hi)
        running = np.maximum.accumulate(np.maximum(scaled, run_max))
        i0, i1 = np.searchsorted(cps, [lo, hi])
        offs = (cps[i0:i1] - lo).astype(np.intp)
        mbar_cp[i0:i1] = traj[offs]
        lil_cp[i0:i1] = running[offs]
        total = int(traj[-1])
        run_max = float(running[-1])
    return ModelRun(seed=seed, x_max=x_max, checkpoints=cps,
                    mbar=mbar_cp, lil_running_max=lil_cp, lil_sup=run_max)


def simulate_many(seed: int, trials: int, x_max: int,
                  policy: CheckpointPolicy | None = None,
                  pool: WorkerPool | None = None) -> list:
    """Independent trials; trial i runs on its own stream keyed seed + i."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    pool = pool or WorkerPool(1)
    policy = policy or CheckpointPolicy()
    return pool.map(lambda i: simulate(seed + i, x_max, policy), range(trials))


def lil_statistic(runs) -> LilSummary:
    """Per-run and aggregate sup of the iterated-logarithm statistic."""
    runs = list(runs)
    if not runs:
        raise ValueError("need at least one run")
    per = np.array([r.lil_sup for r in runs])
    return LilSummary(per_run=per, aggregate_sup=float(per.max()),
                      aggregate_mean=float(per.mean()))


def write_runs_csv(fh, runs):
    """Emit ``trial,x,Mbar,lil_stat`` rows, one per checkpoint per run.

    The lil column is empty below x = 16, where the statistic is undefined.
    """
    fh.write("trial,x,Mbar,lil_stat\n")
    for t, run in enumerate(runs):
        for i in range(len(run.checkpoints)):
            x = int(run.checkpoints[i])
            lil = f"{run.lil_running_max[i]:.9f}" if x >= LIL_MIN_X else ""
            fh.write(f"{t},{x},{int(run.mbar[i])},{lil}\n")
