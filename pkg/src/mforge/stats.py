"""Empirical distribution measurements over the integers up to x.

Exact counts (segmented sweeps) paired with the heuristic predictions they
are compared against: densities of a fixed total prime-factor count, excess
factor-count densities against the Euler-product coefficients, squarefree
sign balance, conditional-independence diagnostics, the geometric law of a
fixed prime's exponent, and empirical central-limit behaviour.  Counts are
the ground truth; predictions are floating point.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .parallel import WorkerPool
from .sieve import DEFAULT_SEGMENT_CAPACITY, Segment, primes_up_to
from .arith import profile_range


class DegenerateSampleError(ValueError):
    """Sample variance is zero; the standardized CDF is undefined."""


@dataclass
class DensityReport:
    """One empirical density next to its predicted main term."""

    x: int
    k: int                  # k or m, depending on the measurement
    count: int              # exact
    predicted: float

    @property
    def empirical(self) -> float:
        return self.count / self.x

    @property
    def abs_error(self) -> float:
        return abs(self.empirical - self.predicted)


@dataclass
class SignBalance:
    x: int
    plus: int               # squarefree n <= x with mobius +1
    minus: int              # ... with mobius -1

    @property
    def squarefree(self) -> int:
        return self.plus + self.minus

    @property
    def fractions(self) -> tuple:
        q = self.squarefree
        return (self.plus / q, self.minus / q)


@dataclass
class ConditionalReport:
    """P(squarefree | big_omega = k) over [3, x] against the unconditional P."""

    x: int
    k: int
    class_count: int
    squarefree_in_class: int
    unconditional: float
    undefined: bool

    @property
    def conditional(self) -> float | None:
        if self.undefined:
            return None
        return self.squarefree_in_class / self.class_count

    @property
    def ratio(self) -> float | None:
        if self.undefined:
            return None
        return self.conditional / self.unconditional


@dataclass
class EmpiricalCdf:
    size: int
    values: np.ndarray      # sorted standardized sample
    ks: float               # sup distance to the standard normal CDF


@dataclass
class RangeCounts:
    """Histograms from one sweep over [1, x]; shared by the density reports."""

    x: int
    big_omega_hist: np.ndarray          # counts of big_omega = k over [1, x]
    excess_hist: np.ndarray             # counts of big_omega - omega = m
    squarefree_by_big_omega: np.ndarray
    mobius_plus: int
    mobius_minus: int

    def big_omega_count_from_3(self, k: int) -> int:
        c = int(self.big_omega_hist[k]) if k < len(self.big_omega_hist) else 0
        if k == 0:
            c -= 1                       # n = 1
        if k == 1 and self.x >= 2:
            c -= 1                       # n = 2
        return c

    def squarefree_by_k_from_3(self, k: int) -> int:
        c = int(self.squarefree_by_big_omega[k]) if k < len(self.squarefree_by_big_omega) else 0
        if k == 0:
            c -= 1
        if k == 1 and self.x >= 2:
            c -= 1
        return c


def collect_counts(x: int, segment_size: int = DEFAULT_SEGMENT_CAPACITY,
                   pool: WorkerPool | None = None) -> RangeCounts:
    """Single segmented sweep filling every histogram the reports need."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    pool = pool or WorkerPool(1)
    kmax = x.bit_length() + 1

    def summarize(seg):
        prof = profile_range(Segment(*seg), include_g=False)
        sq = prof.mobius != 0
        bo = prof.big_omega.astype(np.intp)
        return (
            np.bincount(bo, minlength=kmax),
            np.bincount(bo - prof.omega.astype(np.intp), minlength=kmax),
            np.bincount(bo[sq], minlength=kmax),
            int(np.count_nonzero(prof.mobius == 1)),
            int(np.count_nonzero(prof.mobius == -1)),
        )

    segs = [(lo, min(lo + segment_size, x + 1)) for lo in range(1, x + 1, segment_size)]
    bo_h = np.zeros(kmax, dtype=np.int64)
    ex_h = np.zeros(kmax, dtype=np.int64)
    sq_h = np.zeros(kmax, dtype=np.int64)
    plus = minus = 0
    for b, e, s, p, m in pool.map(summarize, segs):
        bo_h += b
        ex_h += e
        sq_h += s
        plus += p
        minus += m
    return RangeCounts(x, bo_h, ex_h, sq_h, plus, minus)


def omega_k_density(x: int, k: int, counts: RangeCounts | None = None) -> DensityReport:
    """Density of big_omega(n) = k over [3, x] with its predicted main term
    (loglog x)^(k-1) / ((log x) (k-1)!)."""
    if x < 3:
        raise ValueError(f"x must be >= 3, got {x}")
    if k < 0 or (k > 0 and k > math.log2(x)):
        raise ValueError(f"k={k} outside [0, log2(x)]")
    counts = counts or collect_counts(x)
    count = counts.big_omega_count_from_3(k)
    if k == 0:
        predicted = 0.0
    else:
        ll = math.log(math.log(x))
        predicted = ll ** (k - 1) / (math.log(x) * math.factorial(k - 1))
    return DensityReport(x=x, k=k, count=count, predicted=predicted)


def excess_density(x: int, m: int, counts: RangeCounts | None = None,
                   coefficients: "DmCoefficients | None" = None) -> DensityReport:
    """Density of big_omega(n) - omega(n) = m over [1, x] against d_m."""
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    counts = counts or collect_counts(x)
    coefficients = coefficients or d_m_coefficients()
    count = int(counts.excess_hist[m]) if m < len(counts.excess_hist) else 0
    predicted = float(coefficients.values[m]) if m <= coefficients.m_max else 0.0
    return DensityReport(x=x, k=m, count=count, predicted=predicted)


@dataclass
class DmCoefficients:
    """Power-series coefficients of the truncated excess-density product.

    Factor for each prime p: (1 - 1/p) (1 + 1/(p - z)), expanded as
    (1 - 1/p^2) + sum_{j >= 1} (1 - 1/p) p^-(j+1) z^j.  ``tail_bound`` is an
    upper estimate of the multiplicative deviation contributed by the omitted
    primes (bounded by the sum of p^-2 over p > prime_limit).
    """

    prime_limit: int
    m_max: int
    values: np.ndarray
    tail_bound: float


_DM_CACHE: dict = {}


def d_m_coefficients(prime_limit: int = 10**6, m_max: int = 16) -> DmCoefficients:
    if prime_limit < 2:
        raise ValueError(f"prime_limit must be >= 2, got {prime_limit}")
    key = (prime_limit, m_max)
    if key in _DM_CACHE:
        return _DM_CACHE[key]
    coeffs = np.zeros(m_max + 1)
    coeffs[0] = 1.0
    fac = np.empty(m_max + 1)
    for p in primes_up_to(prime_limit):
        p = float(p)
        fac[0] = 1.0 - 1.0 / (p * p)
        scale = (1.0 - 1.0 / p) / (p * p)
        for j in range(1, m_max + 1):
            fac[j] = scale
            scale /= p
        coeffs = np.convolve(coeffs, fac)[: m_max + 1]
    out = DmCoefficients(prime_limit=prime_limit, m_max=m_max, values=coeffs,
                         tail_bound=1.0 / prime_limit)
    _DM_CACHE[key] = out
    return out


def sign_balance(x: int, counts: RangeCounts | None = None) -> SignBalance:
    """Exact counts of mobius = +1 and -1 over n <= x."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    counts = counts or collect_counts(x)
    return SignBalance(x=x, plus=counts.mobius_plus, minus=counts.mobius_minus)


def conditional_squarefree(x: int, k: int, counts: RangeCounts | None = None) -> ConditionalReport:
    """Diagnostic for the independence ansatz: P(squarefree | big_omega = k)
    over [3, x].  Reported, never asserted; an empty class raises no error
    but sets the undefined flag."""
    if x < 3:
        raise ValueError(f"x must be >= 3, got {x}")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    counts = counts or collect_counts(x)
    cls = counts.big_omega_count_from_3(k)
    sq = counts.squarefree_by_k_from_3(k)
    total_sq = sum(counts.squarefree_by_k_from_3(j) for j in range(len(counts.squarefree_by_big_omega)))
    return ConditionalReport(
        x=x, k=k, class_count=cls, squarefree_in_class=sq,
        unconditional=total_sq / (x - 2),
        undefined=cls <= 0,
    )


def prime_exponent_distribution(x: int, p: int, k_max: int) -> list:
    """Per-k table of the exact density of p^k exactly dividing n <= x,
    next to the geometric prediction (1 - 1/p) p^-k.

    Counts come from an explicit residue scan (the closed-form floor counts
    are the independent oracle for them)."""
    if p < 2 or x < p:
        raise ValueError(f"need a prime p <= x, got p={p}, x={x}")
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    n = np.arange(1, x + 1, dtype=np.int64)
    rows = []
    for k in range(k_max + 1):
        pk = p**k
        exact = (n % pk == 0) & (n % (pk * p) != 0) if pk <= x else np.zeros(x, dtype=bool)
        count = int(np.count_nonzero(exact))
        predicted = (1.0 - 1.0 / p) * p ** (-k)
        rows.append(DensityReport(x=x, k=k, count=count, predicted=predicted))
    return rows


def _ks_from_counts(z: np.ndarray, counts: np.ndarray) -> float:
    # sup |F_n - Phi| over a lattice sample given per-value counts
    n = counts.sum()
    cum = np.cumsum(counts)
    phi = ndtr(z)
    upper = np.abs(cum / n - phi)
    lower = np.abs((cum - counts) / n - phi)
    return float(np.maximum(upper, lower).max())


def empirical_cdf(sample: np.ndarray, standardize: bool = True) -> EmpiricalCdf:
    """Sorted standardized sample plus its KS distance to the standard normal."""
    v = np.asarray(sample, dtype=np.float64)
    if v.size == 0:
        raise ValueError("empty sample")
    if standardize:
        sd = v.std(ddof=1) if v.size > 1 else 0.0
        if sd == 0.0:
            raise DegenerateSampleError("sample standard deviation is zero")
        v = (v - v.mean()) / sd
    v = np.sort(v)
    n = v.size
    phi = ndtr(v)
    steps = np.arange(1, n + 1) / n
    ks = float(max(np.abs(steps - phi).max(), np.abs(steps - 1.0 / n - phi).max()))
    return EmpiricalCdf(size=n, values=v, ks=ks)


def erdos_kac_cdf(x: int, statistic: str = "omega",
                  segment_size: int = DEFAULT_SEGMENT_CAPACITY,
                  pool: WorkerPool | None = None) -> EmpiricalCdf:
    """Empirical CDF of a standardized additive statistic over n in [3, x].

    statistic "omega" uses the classical centering
    (omega(n) - loglog x) / sqrt(loglog x); "log_c_omega" has no published
    centering constants, so it is standardized empirically by sample mean
    and standard deviation.
    """
    if x < 100:
        raise ValueError(f"x must be >= 100, got {x}")
    if statistic not in ("omega", "log_c_omega"):
        raise ValueError(f"unknown statistic {statistic!r}")
    pool = pool or WorkerPool(1)
    segs = [(max(lo, 3), min(lo + segment_size, x + 1))
            for lo in range(1, x + 1, segment_size)]

    if statistic == "omega":
        kmax = x.bit_length() + 1

        def summarize(seg):
            prof = profile_range(Segment(*seg), include_g=False)
            return np.bincount(prof.omega.astype(np.intp), minlength=kmax)

        hist = np.zeros(kmax, dtype=np.int64)
        for h in pool.map(summarize, segs):
            hist += h
        ll = math.log(math.log(x))
        ks_vals = np.nonzero(hist)[0]
        z = (ks_vals - ll) / math.sqrt(ll)
        counts = hist[ks_vals]
        ks = _ks_from_counts(z, counts)
        values = np.repeat(z, counts)
        return EmpiricalCdf(size=int(counts.sum()), values=values, ks=ks)

    def summarize(seg):
        prof = profile_range(Segment(*seg), include_g=False)
        return np.log(prof.c_omega.astype(np.float64))

    sample = np.concatenate(pool.map(summarize, segs))
    return empirical_cdf(sample, standardize=True)
