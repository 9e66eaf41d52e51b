import numpy as np
import pytest

from mforge.sieve import (
    FactorSieve,
    PrimeCountTable,
    RangeCoverageError,
    SeedPrimeError,
    Segment,
    SegmentCapacityError,
    build_factor_table,
    factorize,
    load_prime_cache,
    prime_pi,
    primes_up_to,
    save_prime_cache,
)

from oracles import spf_trial, trial_factorize


def test_segment_validation():
    with pytest.raises(ValueError):
        Segment(0, 5)
    with pytest.raises(ValueError):
        Segment(5, 5)
    seg = Segment(3, 10)
    assert seg.width == 7
    assert 3 in seg and 9 in seg and 10 not in seg


def test_spf_small_segment():
    t = build_factor_table(Segment(2, 10))
    assert t.spf.tolist() == [2, 3, 2, 5, 2, 7, 2, 3]


def test_spf_n1_sentinel():
    t = build_factor_table(Segment(1, 2))
    assert t.spf_of(1) == 1


def test_spf_offset_segment_vs_trial_division():
    lo = 10**6
    t = build_factor_table(Segment(lo, lo + 8))
    for n in range(lo, lo + 8):
        assert t.spf_of(n) == spf_trial(n)
    assert t.spf_of(10**6) == 2
    assert t.spf_of(10**6 + 3) == 1000003   # 10^6 + 3 is prime


def test_spf_invariants_random_segments():
    rng = np.random.default_rng(7)
    for lo in rng.integers(1, 10**8, size=4):
        lo = int(lo)
        t = build_factor_table(Segment(lo, lo + 2000))
        ns = np.arange(lo, lo + 2000, dtype=np.int64)
        spf = t.spf
        start = 1 if lo == 1 else 0
        assert np.all(ns[start:] % spf[start:] == 0)
        # spf <= sqrt(n) or spf == n
        small = spf[start:] * spf[start:] <= ns[start:]
        assert np.all(small | (spf[start:] == ns[start:]))


def test_capacity_error():
    with pytest.raises(SegmentCapacityError):
        build_factor_table(Segment(1, 100), capacity=10)


def test_missing_seed_primes_rejected():
    with pytest.raises(SeedPrimeError):
        build_factor_table(Segment(1, 10**4), seed_primes=np.array([2, 3, 5]))
    # complete list up to its own max is fine even when max < isqrt(hi-1)
    build_factor_table(Segment(1, 102), seed_primes=primes_up_to(10))


def test_factorize_examples():
    sv = FactorSieve()
    assert factorize(12, sv).factors == ((2, 2), (3, 1))
    assert factorize(1, sv).factors == ()
    assert factorize(510510, sv).factors == tuple(trial_factorize(510510))


def test_factorize_reconstructs_n():
    sv = FactorSieve()
    rng = np.random.default_rng(3)
    for n in rng.integers(1, 10**9, size=50):
        n = int(n)
        f = factorize(n, sv)
        prod = 1
        for p, a in f:
            prod *= p**a
        assert prod == n
        assert f.factors == tuple(trial_factorize(n))


def test_factorize_out_of_range_table():
    t = build_factor_table(Segment(50, 60))
    with pytest.raises(RangeCoverageError):
        factorize(10, t)


def test_primes_up_to():
    assert primes_up_to(10).tolist() == [2, 3, 5, 7]
    assert primes_up_to(1).size == 0
    assert len(primes_up_to(100)) == 25


def test_prime_pi_table():
    t = PrimeCountTable(10**5)
    ps = primes_up_to(10**5)
    # exhaustive: pi(x) equals the count of listed primes <= x
    pis = t.rank_many(np.arange(1, 10**5 + 1))
    expect = np.searchsorted(ps, np.arange(1, 10**5 + 1), side="right")
    assert np.array_equal(pis, expect)
    assert prime_pi(1, t) == 0
    assert prime_pi(2, t) == 1
    assert prime_pi(10, t) == 4
    assert np.all(np.diff(pis) >= 0)
    with pytest.raises(RangeCoverageError):
        t.rank(10**5 + 1)


def test_prime_pi_millionth():
    t = PrimeCountTable(10**6)
    assert t.rank(10**6) == 78498


def test_prime_pi_degenerate_limits():
    t = PrimeCountTable(1)
    assert t.rank(1) == 0
    assert PrimeCountTable(2).rank(2) == 1
    with pytest.raises(ValueError):
        PrimeCountTable(0)


def test_segmented_matches_monolithic():
    whole = build_factor_table(Segment(1, 3 * 10**4))
    for lo in (1, 777, 15000, 29000):
        part = build_factor_table(Segment(lo, min(lo + 1000, 3 * 10**4)))
        assert np.array_equal(part.spf, whole.spf[lo - 1 : lo - 1 + part.segment.width])


def test_prime_cache_roundtrip(tmp_path):
    path = tmp_path / "primes.bin"
    ps = primes_up_to(10**4)
    save_prime_cache(path, ps)
    raw = path.read_bytes()
    assert raw[:9] == b"MFPRIMES1"
    assert np.array_equal(load_prime_cache(path), ps)
    # cached seeds usable for segment builds
    t = build_factor_table(Segment(10**6, 10**6 + 100), seed_primes=load_prime_cache(path))
    assert t.spf_of(10**6) == 2


def test_prime_cache_bad_magic(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"NOTPRIMES" + b"\x00" * 16)
    with pytest.raises(ValueError):
        load_prime_cache(path)
