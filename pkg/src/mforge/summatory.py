"""Checkpointed summatory sweeps and the exact partial-sum identities.

One streaming pass over segments produces, at every checkpoint, the exact
values of the Mertens sum M, the inverse-table sum G, the squarefree count
Qsq, and the prime count pi.  The pass also records M, U (partial sums of
liouville * c_omega) and pi at every quotient point floor(c/k) of every
checkpoint c; those tables are what the prime-grouped Mertens identity needs,
and for large N they are how G itself is assembled without ever storing the
per-n inverse table.
"""

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .arith import g_table, profile_range
from .parallel import WorkerPool
from .sieve import DEFAULT_SEGMENT_CAPACITY, PrimeCountTable, RangeCoverageError, Segment

#: Above this limit build_series stops materializing the per-n inverse table
#: and assembles G from the quotient-point tables instead (bounded memory).
DIRECT_G_LIMIT = 2 * 10**7

_INT64_MAX = np.iinfo(np.int64).max
_SAFE_SUM = 1 << 62


@dataclass(frozen=True)
class CheckpointPolicy:
    """Rule choosing the x values at which summatory values are recorded.

    kind "all" records every integer, "geometric" records a geometric ladder
    (plus every power of 10, plus N), "explicit" records a given list (N is
    appended when missing).  Checkpoints are strictly increasing and always
    end at N.
    """

    kind: str = "geometric"
    ratio: float = 1.25
    points: tuple = ()

    def __post_init__(self):
        if self.kind not in ("all", "geometric", "explicit"):
            raise ValueError(f"unknown checkpoint policy kind {self.kind!r}")
        if self.kind == "geometric" and not self.ratio > 1.0:
            raise ValueError(f"geometric ratio must exceed 1, got {self.ratio}")

    def checkpoints(self, N: int) -> np.ndarray:
        if N < 1:
            raise ValueError(f"N must be >= 1, got {N}")
        if self.kind == "all":
            return np.arange(1, N + 1, dtype=np.int64)
        if self.kind == "geometric":
            pts = [1]
            x = 1
            while x < N:
                x = min(max(int(x * self.ratio), x + 1), N)
                pts.append(x)
            d = 10
            while d <= N:
                pts.append(d)
                d *= 10
            pts.append(N)
            return np.unique(np.asarray(pts, dtype=np.int64))
        pts = np.unique(np.asarray(self.points, dtype=np.int64))
        if pts.size == 0 or pts[0] < 1 or pts[-1] > N:
            raise ValueError("explicit checkpoints must lie in [1, N]")
        if pts[-1] != N:
            pts = np.append(pts, N)
        return pts

    @classmethod
    def parse(cls, text: str) -> "CheckpointPolicy":
        """Parse 'all', 'geometric[:ratio]' or 'explicit:1,10,100'."""
        kind, _, arg = text.partition(":")
        if kind == "all":
            return cls(kind="all")
        if kind == "geometric":
            return cls(kind="geometric", ratio=float(arg) if arg else 1.25)
        if kind == "explicit":
            return cls(kind="explicit", points=tuple(int(s) for s in arg.split(",") if s))
        raise ValueError(f"cannot parse checkpoint policy {text!r}")


@dataclass
class SummatoryRows:
    """Checkpoint rows: the interchange content of the series CSV."""

    checkpoints: np.ndarray
    M: np.ndarray
    G: np.ndarray
    Qsq: np.ndarray
    pi: np.ndarray

    def to_csv(self, fh):
        fh.write("x,M,G,Qsq,pi\n")
        for i in range(len(self.checkpoints)):
            fh.write(f"{int(self.checkpoints[i])},{int(self.M[i])},"
                     f"{int(self.G[i])},{int(self.Qsq[i])},{int(self.pi[i])}\n")

    @classmethod
    def from_csv(cls, fh) -> "SummatoryRows":
        header = fh.readline().strip()
        if header != "x,M,G,Qsq,pi":
            raise ValueError(f"unexpected series header {header!r}")
        rows = [tuple(int(v) for v in line.strip().split(",")) for line in fh if line.strip()]
        cols = list(zip(*rows)) if rows else [[], [], [], [], []]
        return cls(*(np.asarray(c, dtype=np.int64) for c in cols))


@dataclass
class SummatorySeries:
    """Checkpoint rows plus the quotient-point support tables."""

    N: int
    rows: SummatoryRows | None
    eval_points: np.ndarray     # sorted; closed under x -> x // k
    M_eval: np.ndarray
    U_eval: np.ndarray
    pi_eval: np.ndarray
    G_eval: np.ndarray
    route: str                  # "direct" (per-n g summed) or "quotient"
    _G_valid: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self._G_valid is None:
            self._G_valid = np.ones(len(self.eval_points), dtype=bool)

    @property
    def checkpoints(self):
        return self.rows.checkpoints

    @property
    def M(self):
        return self.rows.M

    @property
    def G(self):
        return self.rows.G

    @property
    def Qsq(self):
        return self.rows.Qsq

    @property
    def pi(self):
        return self.rows.pi

    def to_csv(self, fh):
        self.rows.to_csv(fh)

    def _idx(self, x) -> int:
        i = int(np.searchsorted(self.eval_points, x))
        if i >= len(self.eval_points) or self.eval_points[i] != x:
            raise RangeCoverageError(f"x={x} is not a recorded support point")
        return i

    def _idx_many(self, xs: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.eval_points, xs)
        if idx.size and (idx.max() >= len(self.eval_points)
                         or not np.array_equal(self.eval_points[idx], xs)):
            raise RangeCoverageError("query outside the recorded support points")
        return idx

    def m_at(self, x: int) -> int:
        return int(self.M_eval[self._idx(x)])

    def u_at(self, x: int) -> int:
        if x == 0:
            return 0
        return int(self.U_eval[self._idx(x)])

    def pi_at(self, x: int) -> int:
        if x == 0:
            return 0
        return int(self.pi_eval[self._idx(x)])

    def pi_many(self, xs: np.ndarray) -> np.ndarray:
        return self.pi_eval[self._idx_many(xs)]

    def G_at(self, x: int) -> int:
        i = self._idx(x)
        if not self._G_valid[i]:
            self.G_eval[i] = self._assemble_G(x)
            self._G_valid[i] = True
        return int(self.G_eval[i])

    def G_many(self, xs: np.ndarray) -> np.ndarray:
        idx = self._idx_many(xs)
        for j in np.nonzero(~self._G_valid[idx])[0]:
            self.G_at(int(xs[j]))
        return self.G_eval[idx]

    def _assemble_G(self, x: int) -> int:
        # G(x) = sum_{n <= x} u(n) * M(x // n) with u = liouville * c_omega,
        # grouped over blocks of equal quotient; every point touched is in
        # the quotient closure of x, hence recorded.
        t = isqrt(x)
        ns = np.arange(1, t + 1, dtype=np.int64)
        u_small = self.U_eval[self._idx_many(ns)]
        u_small = np.diff(u_small, prepend=np.int64(0))        # pointwise u(n), n <= t
        m_big = self.M_eval[self._idx_many(x // ns)]
        total = int(u_small @ m_big)
        qs = np.arange(1, x // (t + 1) + 1, dtype=np.int64)
        if qs.size:
            hi = x // qs
            lo = np.maximum(x // (qs + 1), t)
            w = self.U_eval[self._idx_many(hi)] - self.U_eval[self._idx_many(lo)]
            m_small = self.M_eval[self._idx_many(qs)]
            total += int(w @ m_small)
        return total


def _eval_point_union(checkpoints: np.ndarray, N: int) -> np.ndarray:
    if len(checkpoints) == N:
        return np.arange(1, N + 1, dtype=np.int64)
    parts = [np.arange(1, isqrt(N) + 1, dtype=np.int64)]
    budget = 0
    for c in checkpoints:
        c = int(c)
        t = isqrt(c)
        parts.append(c // np.arange(1, t + 1, dtype=np.int64))
        budget += t
        if budget > 4_000_000:
            parts = [np.unique(np.concatenate(parts))]
            budget = 0
    return np.unique(np.concatenate(parts))


def build_series(N: int, policy: CheckpointPolicy | None = None, *,
                 segment_size: int = DEFAULT_SEGMENT_CAPACITY,
                 direct_g_limit: int = DIRECT_G_LIMIT,
                 pool: WorkerPool | None = None) -> SummatorySeries:
    """One streaming pass computing all summatory functions at the checkpoints.

    For N <= direct_g_limit the inverse table is materialized and G summed
    directly; beyond that, G is assembled from M and U at quotient points so
    peak memory stays independent of N apart from those tables.
    """
    if N < 1:
        raise ValueError(f"x must be >= 1, got {N}")
    policy = policy or CheckpointPolicy()
    pool = pool or WorkerPool(1)
    cps = policy.checkpoints(N)
    eval_points = _eval_point_union(cps, N)
    direct = N <= direct_g_limit
    g = g_table(N, segment_size=segment_size) if direct else None

    n_eval = len(eval_points)
    cols = 5 if direct else 4           # column order: M, Qsq, pi, U, (G)
    recorded = np.zeros((cols, n_eval), dtype=np.int64)

    def summarize(seg):
        lo, hi = seg
        prof = profile_range(Segment(lo, hi), include_g=False)
        sweeps = [
            np.cumsum(prof.mobius, dtype=np.int64),
            np.cumsum(prof.mobius != 0, dtype=np.int64),
            np.cumsum(prof.prime_mask(), dtype=np.int64),
            np.cumsum(prof.signed_c_omega(), dtype=np.int64),
        ]
        if direct:
            sweeps.append(np.cumsum(g[lo:hi], dtype=np.int64))
        i0 = int(np.searchsorted(eval_points, lo))
        i1 = int(np.searchsorted(eval_points, hi))
        offs = (eval_points[i0:i1] - lo).astype(np.intp)
        local = np.stack([c[offs] for c in sweeps]) if i1 > i0 else None
        totals = [int(c[-1]) for c in sweeps]
        return i0, i1, local, totals

    segs = [(lo, min(lo + segment_size, N + 1)) for lo in range(1, N + 1, segment_size)]
    base = [0] * cols
    for i0, i1, local, totals in pool.map(summarize, segs):
        if local is not None:
            recorded[:, i0:i1] = np.asarray(base, dtype=np.int64)[:, None] + local
        for j, t in enumerate(totals):
            base[j] += t
        if max(abs(b) for b in base) > _SAFE_SUM:
            raise OverflowError("summatory accumulator exceeded its safety bound")

    series = SummatorySeries(
        N=N, rows=None, eval_points=eval_points,
        M_eval=recorded[0], U_eval=recorded[3], pi_eval=recorded[2],
        G_eval=recorded[4] if direct else np.zeros(n_eval, dtype=np.int64),
        route="direct" if direct else "quotient",
        _G_valid=np.ones(n_eval, dtype=bool) if direct else np.zeros(n_eval, dtype=bool),
    )
    cp_idx = series._idx_many(cps)
    G_rows = (series.G_eval[cp_idx] if direct
              else np.array([series.G_at(int(c)) for c in cps], dtype=np.int64))
    series.rows = SummatoryRows(
        checkpoints=cps,
        M=recorded[0][cp_idx],
        G=G_rows,
        Qsq=recorded[1][cp_idx],
        pi=recorded[2][cp_idx],
    )
    return series


def mertens_via_g_pi(x: int, g: np.ndarray, pi_table: PrimeCountTable) -> int:
    """M(x) evaluated as G(x) + sum_{k <= x} g(k) * pi(floor(x / k)).

    ``g`` is the inverse table in 1-indexed layout covering 1..x; the prime
    counts come from the rank bit set.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    g = np.asarray(g)
    if g.shape[0] < x + 1:
        raise RangeCoverageError(f"g table covers {g.shape[0] - 1} < x = {x}")
    if pi_table.limit < x:
        raise RangeCoverageError(f"pi table limit {pi_table.limit} < x = {x}")
    gx = g[1 : x + 1].astype(np.int64, copy=False)
    max_g = int(np.abs(gx).max())
    pix = pi_table.rank(x)
    if max_g and max_g * pix > _INT64_MAX // x:
        # cannot rule out int64 overflow in the dot product; do it exactly
        ks = range(1, x + 1)
        return sum(int(g[k]) * pi_table.rank(x // k) for k in ks) + int(gx.sum())
    qs = x // np.arange(1, x + 1, dtype=np.int64)
    return int(gx @ pi_table.rank_many(qs)) + int(gx.sum())


def mertens_via_G_over_primes(x: int, series: SummatorySeries) -> int:
    """M(x) evaluated as G(x) + sum over primes p <= x of G(floor(x / p)).

    Primes are grouped into blocks of equal quotient, so only G and pi values
    at the quotient points of x are touched; x itself must be one of the
    series' recorded support points (any checkpoint qualifies).
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    total = series.G_at(x)
    t = isqrt(x)
    # p <= t handled one k at a time: weight pi(k) - pi(k-1) is the prime flag
    ks = np.arange(1, t + 1, dtype=np.int64)
    pk = series.pi_many(ks)
    flags = np.diff(pk, prepend=np.int64(0))
    total += int(flags @ series.G_many(x // ks))
    # p > t grouped by quotient q = x // p
    qs = np.arange(1, x // (t + 1) + 1, dtype=np.int64)
    if qs.size:
        hi = x // qs
        lo = np.maximum(x // (qs + 1), t)
        counts = series.pi_many(hi) - series.pi_many(lo)
        total += int(counts @ series.G_many(qs))
    return total


def q_hat(n: int, x: int, profile) -> int:
    """Signed squarefree sum: sum_{j <= x} liouville(n * j) * mu^2(j).

    liouville is completely multiplicative, so the factor liouville(n) comes
    out of the sum.  ``profile`` must start at 1 and cover max(n, x).
    """
    if n < 1 or x < 1:
        raise ValueError("n and x must be >= 1")
    if profile.segment.lo != 1 or profile.segment.hi <= max(n, x):
        raise RangeCoverageError("profile must cover [1, max(n, x)] starting at 1")
    lam_n = int(profile.liouville[n - 1])
    lam = profile.liouville[:x].astype(np.int64)
    mu2 = (profile.mobius[:x] != 0)
    return lam_n * int((lam * mu2).sum())


def g_via_double_sum(x: int, profile) -> int:
    """G(x) via the double sum: outer liouville * c_omega, inner signed
    squarefree partial sums at floor(x / n).  Exact; must equal G(x)."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if profile.segment.lo != 1 or profile.segment.hi <= x:
        raise RangeCoverageError("profile must cover [1, x] starting at 1")
    u = profile.signed_c_omega()[:x]
    lam_mu2 = profile.liouville[:x].astype(np.int64) * (profile.mobius[:x] != 0)
    inner = np.concatenate([[0], np.cumsum(lam_mu2)])   # inner[y] for y = 0..x
    ns = np.arange(1, x + 1, dtype=np.int64)
    return int(u @ inner[x // ns])
