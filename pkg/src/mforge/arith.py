"""Per-n arithmetic functions, pointwise and in bulk.

Covers the distinct/total prime-factor counts omega and big_omega, mobius,
liouville, the exponent-multinomial coefficient ``c_omega`` (the multinomial
of the exponent multiset of n), and the table ``g`` defined as the Dirichlet
inverse of ``omega + 1``.  Bulk computation works over arbitrary contiguous
segments; ``g`` is only defined for prefix ranges starting at 1 because its
recursion is a prefix dependency.
"""

import math
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .sieve import DEFAULT_SEGMENT_CAPACITY, Factorization, FactorSieve, Segment, primes_up_to

#: Values at or beyond this bound trigger the checked-overflow error in the
#: pointwise multinomial (128-bit capacity semantics).
C_OMEGA_CHECK_BOUND = 1 << 127

_INT64_MAX = np.iinfo(np.int64).max


def _binom_table(n_max: int) -> np.ndarray:
    """Exact C(n, k) lookup table for n, k <= n_max (values stay below 2^63)."""
    tab = np.zeros((n_max + 1, n_max + 1), dtype=np.int64)
    for n in range(n_max + 1):
        for k in range(n + 1):
            v = math.comb(n, k)
            if v > _INT64_MAX:
                raise OverflowError(f"binomial C({n},{k}) exceeds int64")
            tab[n, k] = v
    return tab


@dataclass
class ArithmeticProfile:
    """All per-n function values over one contiguous segment.

    Arrays are indexed by offset ``n - segment.lo``.  ``g`` is populated only
    when the segment starts at 1 (prefix dependency); otherwise it is None.
    """

    segment: Segment
    omega: np.ndarray        # uint8, distinct prime factors
    big_omega: np.ndarray    # uint8, prime factors with multiplicity
    mobius: np.ndarray       # int8 in {-1, 0, +1}
    liouville: np.ndarray    # int8 in {-1, +1}
    c_omega: np.ndarray      # int64, exponent multinomial, overflow-checked
    g: np.ndarray | None     # int64 when segment.lo == 1, else None

    def index(self, n: int) -> int:
        if n not in self.segment:
            raise ValueError(f"{n} outside [{self.segment.lo}, {self.segment.hi})")
        return n - self.segment.lo

    def mu_squared(self) -> np.ndarray:
        """Squarefree indicator as int8."""
        return (self.mobius != 0).astype(np.int8)

    def signed_c_omega(self) -> np.ndarray:
        """liouville(n) * c_omega(n) as int64."""
        return self.liouville.astype(np.int64) * self.c_omega

    def prime_mask(self) -> np.ndarray:
        """Boolean primality mask (big_omega == 1)."""
        return self.big_omega == 1


def profile_range(segment: Segment, factor_source: FactorSieve | None = None,
                  include_g: bool = True) -> ArithmeticProfile:
    """Compute every per-n function over a segment in vectorized sweeps.

    Each seed prime p contributes through strided views on the multiples of
    p; exponents are accumulated one power level at a time, and the
    multinomial is built up as a running product of exact binomials.
    A surviving cofactor > 1 after all seed primes is a single large prime.
    """
    lo, hi = segment.lo, segment.hi
    width = segment.width
    if factor_source is not None:
        seeds = factor_source.seed_primes(isqrt(hi - 1))
    else:
        seeds = primes_up_to(isqrt(hi - 1))

    omega = np.zeros(width, dtype=np.uint8)
    big = np.zeros(width, dtype=np.uint8)
    c = np.ones(width, dtype=np.int64)
    rem = np.arange(lo, hi, dtype=np.int64)
    binom = _binom_table((hi - 1).bit_length())

    for p in seeds:
        p = int(p)
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        if start >= hi:
            continue
        s = start - lo
        stride_len = (width - s + p - 1) // p
        alpha = np.ones(stride_len, dtype=np.uint8)
        pe = p * p
        while pe < hi:
            st_e = ((lo + pe - 1) // pe) * pe
            if st_e >= hi:
                break
            alpha[(st_e - start) // p :: pe // p] += 1
            pe *= p
        omega[s::p] += 1
        bo = big[s::p]
        bo += alpha
        c[s::p] *= binom[bo.astype(np.intp), alpha.astype(np.intp)]
        rem[s::p] //= np.power(np.int64(p), alpha.astype(np.int64))

    left = rem > 1
    omega[left] += 1
    big[left] += 1
    c[left] *= big[left]

    _check_c_omega(segment, big, c)

    squarefree = omega == big
    mobius = np.where(squarefree, 1 - 2 * (omega.astype(np.int8) & 1), 0).astype(np.int8)
    liouville = (1 - 2 * (big.astype(np.int8) & 1)).astype(np.int8)

    g = None
    if include_g and lo == 1:
        g = g_table(hi - 1, omega=omega)[1:]

    return ArithmeticProfile(
        segment=segment, omega=omega, big_omega=big,
        mobius=mobius, liouville=liouville, c_omega=c, g=g,
    )


def _check_c_omega(segment: Segment, big: np.ndarray, c: np.ndarray):
    # The running product is monotone (each binomial factor >= 1), so the
    # final value bounds every intermediate.  big_omega <= 20 implies the
    # multinomial <= 20! < 2^63, hence no overflow.  Anything larger is rare
    # enough to recheck exactly.
    if not big.size or int(big.max()) <= 20:
        return
    sieve = FactorSieve()
    for i in np.nonzero(big > 20)[0]:
        n = segment.lo + int(i)
        exact = c_omega(sieve.factorize(n))
        if exact > _INT64_MAX:
            raise OverflowError(f"c_omega({n}) exceeds the checked integer width")
        assert exact == int(c[i]), f"c_omega mismatch at n={n}"


def c_omega(fact: Factorization) -> int:
    """Exponent multinomial: big_omega! / prod(alpha_i!), exactly.

    Built as a running product of binomials C(alpha_1 + ... + alpha_i,
    alpha_i), so no large factorial is ever divided.  Raises OverflowError
    beyond 128-bit capacity.
    """
    total = 0
    out = 1
    for _, a in fact:
        total += a
        out *= math.comb(total, a)
        if out >= C_OMEGA_CHECK_BOUND:
            raise OverflowError(f"c_omega({fact.n}) exceeds the checked integer width")
    return out


def g_squarefree_closed_form(r: int) -> int:
    """Value of the inverse table at any squarefree n with r distinct primes.

    (-1)^r * sum_{m=0..r} C(r, m) * m!.
    """
    if r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    total = sum(math.comb(r, m) * math.factorial(m) for m in range(r + 1))
    if total >= C_OMEGA_CHECK_BOUND:
        raise OverflowError(f"closed form at r={r} exceeds the checked integer width")
    return (-1) ** r * total


def g_table(N: int, omega: np.ndarray | None = None,
            segment_size: int = DEFAULT_SEGMENT_CAPACITY) -> np.ndarray:
    """The Dirichlet inverse of (omega + 1) on 1..N as int64 (index 0 unused).

    Uses the multiples-push schedule: blocks [a, min(2a, N+1)) are finalized
    in ascending order; every contribution into a block comes from an index
    m < a whose value is already final, so blocks have no internal
    dependencies and each divisor pair (d >= 2, m) is pushed exactly once.
    Total work is O(N log N).
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if omega is None:
        omega = _omega_prefix(N, segment_size)
    else:
        omega = np.asarray(omega)
        if omega.shape[0] == N:        # offset-0 layout from profile_range
            omega = np.concatenate([[0], omega])
        if omega.shape[0] < N + 1:
            raise ValueError("omega table shorter than N")
    w1 = omega.astype(np.uint8) + np.uint8(1)   # omega(d) + 1, d-indexed

    g = np.zeros(N + 1, dtype=np.int64)
    g[1] = 1
    a = 2
    while a <= N:
        b = min(2 * a, N + 1)
        block = np.zeros(b - a, dtype=np.int64)
        t = isqrt(b - 1)
        for d in range(2, t + 1):
            mlo = (a + d - 1) // d
            mhi = (b - 1) // d
            if mlo > mhi:
                continue
            block[d * mlo - a : d * mhi - a + 1 : d] += np.int64(w1[d]) * g[mlo : mhi + 1]
        for m in range(1, (b - 1) // (t + 1) + 1):
            dlo = max(t + 1, (a + m - 1) // m)
            dhi = (b - 1) // m
            if dlo > dhi:
                continue
            block[m * dlo - a : m * dhi - a + 1 : m] += g[m] * w1[dlo : dhi + 1].astype(np.int64)
        g[a:b] = -block
        a = b

    # |g| stays far below this at any feasible N; a breach would mean the
    # int64 accumulator could have wrapped mid-sum.
    if N >= 2 and int(np.abs(g[1:]).max()) > 1 << 48:
        raise OverflowError("inverse-table accumulator exceeded its safety bound")
    return g


def _omega_prefix(N: int, segment_size: int) -> np.ndarray:
    """omega on 1..N (index 0 unused) via chunked segment profiles."""
    out = np.zeros(N + 1, dtype=np.uint8)
    lo = 1
    while lo <= N:
        hi = min(lo + segment_size, N + 1)
        prof = profile_range(Segment(lo, hi), include_g=False)
        out[lo:hi] = prof.omega
        lo = hi
    return out


def write_sequence_csv(fh, values: np.ndarray, start: int = 1):
    """Write ``n,value`` rows (decimal, newline-terminated) for a sequence."""
    fh.write("n,value\n")
    for i, v in enumerate(values):
        fh.write(f"{start + i},{int(v)}\n")


def compare_bfile(path, values: np.ndarray, start: int = 1):
    """Check a sequence against an OEIS b-file (lines ``index value``).

    Returns None if every overlapping entry matches, else a tuple
    ``(index, file_value, computed_value)`` for the first mismatch.
    Comment lines starting with ``#`` and blank lines are ignored; indices
    outside the computed range are skipped.
    """
    stop = start + len(values)
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ValueError(f"malformed b-file line: {line!r}")
            idx, val = int(parts[0]), int(parts[1])
            if not start <= idx < stop:
                continue
            got = int(values[idx - start])
            if got != val:
                return (idx, val, got)
    return None
