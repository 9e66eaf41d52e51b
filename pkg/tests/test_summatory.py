import io

import numpy as np
import pytest

from mforge.arith import g_table, profile_range
from mforge.parallel import WorkerPool
from mforge.sieve import PrimeCountTable, RangeCoverageError, Segment
from mforge.summatory import (
    CheckpointPolicy,
    SummatoryRows,
    build_series,
    g_via_double_sum,
    mertens_via_G_over_primes,
    mertens_via_g_pi,
    q_hat,
)

from oracles import (
    MERTENS_AT_POW10,
    PI_AT_POW10,
    g_recursion_oracle,
    mertens_oracle,
    mobius_block_oracle,
    squarefree_count_oracle,
)


def test_policy_all():
    cps = CheckpointPolicy(kind="all").checkpoints(10)
    assert cps.tolist() == list(range(1, 11))


def test_policy_geometric():
    cps = CheckpointPolicy(kind="geometric", ratio=2.0).checkpoints(100)
    assert cps[0] == 1 and cps[-1] == 100
    assert np.all(np.diff(cps) > 0)
    assert 10 in cps and 100 in cps  # decades always present


def test_policy_explicit():
    cps = CheckpointPolicy(kind="explicit", points=(5, 2, 9)).checkpoints(20)
    assert cps.tolist() == [2, 5, 9, 20]
    with pytest.raises(ValueError):
        CheckpointPolicy(kind="explicit", points=(0, 5)).checkpoints(20)
    with pytest.raises(ValueError):
        CheckpointPolicy(kind="explicit", points=(30,)).checkpoints(20)


def test_policy_validation():
    with pytest.raises(ValueError):
        CheckpointPolicy(kind="bogus")
    with pytest.raises(ValueError):
        CheckpointPolicy(kind="geometric", ratio=1.0)
    with pytest.raises(ValueError):
        CheckpointPolicy().checkpoints(0)


def test_policy_parse():
    assert CheckpointPolicy.parse("all").kind == "all"
    p = CheckpointPolicy.parse("geometric:1.5")
    assert p.kind == "geometric" and p.ratio == 1.5
    assert CheckpointPolicy.parse("explicit:1,10,100").points == (1, 10, 100)
    with pytest.raises(ValueError):
        CheckpointPolicy.parse("fibonacci")


def test_series_first_ten_rows():
    s = build_series(10, CheckpointPolicy(kind="all"))
    assert s.M.tolist() == [1, 0, -1, -1, -2, -1, -2, -2, -2, -1]
    assert s.G[:4].tolist() == [1, -1, -3, -1]
    assert int(s.Qsq[-1]) == 7
    assert int(s.pi[-1]) == 4


def test_series_invariants_at_one():
    s = build_series(1, CheckpointPolicy(kind="all"))
    assert (int(s.M[0]), int(s.G[0]), int(s.Qsq[0]), int(s.pi[0])) == (1, 1, 1, 0)


def test_series_against_oracles_2000():
    N = 2000
    s = build_series(N, CheckpointPolicy(kind="all"))
    mu = mobius_block_oracle(N)
    g = np.array(g_recursion_oracle(N), dtype=np.int64)
    assert np.array_equal(s.M, np.cumsum(mu[1:]))
    assert np.array_equal(s.G, np.cumsum(g[1:]))
    assert np.array_equal(s.Qsq, np.cumsum(mu[1:] != 0))
    assert int(s.Qsq[-1]) == squarefree_count_oracle(N)


def test_series_qsq_nondecreasing_and_pow10_spots():
    s = build_series(10**6, CheckpointPolicy())
    assert np.all(np.diff(s.Qsq) >= 0)
    for x, m in MERTENS_AT_POW10.items():
        if x <= 10**6:
            i = np.nonzero(s.checkpoints == x)[0]
            assert i.size == 1 and int(s.M[i[0]]) == m
    for x, p in PI_AT_POW10.items():
        if x <= 10**6:
            i = np.nonzero(s.checkpoints == x)[0]
            assert int(s.pi[i[0]]) == p


def test_series_routes_agree():
    pol = CheckpointPolicy(kind="geometric", ratio=1.4)
    direct = build_series(10**5, pol)
    quot = build_series(10**5, pol, direct_g_limit=100)
    assert direct.route == "direct" and quot.route == "quotient"
    for col in ("checkpoints", "M", "G", "Qsq", "pi"):
        assert np.array_equal(getattr(direct, col), getattr(quot, col)), col


def test_series_segment_size_and_workers_invariant():
    pol = CheckpointPolicy(kind="geometric", ratio=1.8)
    a = build_series(10**5, pol, segment_size=10**5 + 1)
    b = build_series(10**5, pol, segment_size=977)
    c = build_series(10**5, pol, segment_size=977, pool=WorkerPool(4))
    for col in ("M", "G", "Qsq", "pi"):
        assert np.array_equal(getattr(a, col), getattr(b, col))
        assert np.array_equal(getattr(b, col), getattr(c, col))


def test_series_rejects_zero():
    with pytest.raises(ValueError):
        build_series(0, CheckpointPolicy())


def test_mertens_via_g_pi_examples():
    g = g_table(100)
    pt = PrimeCountTable(100)
    assert mertens_via_g_pi(1, g, pt) == 1
    assert mertens_via_g_pi(4, g, pt) == -1
    for x in range(1, 101):
        assert mertens_via_g_pi(x, g, pt) == mertens_oracle(x)


def test_mertens_via_g_pi_range_errors():
    g = g_table(50)
    with pytest.raises(RangeCoverageError):
        mertens_via_g_pi(60, g, PrimeCountTable(100))
    with pytest.raises(RangeCoverageError):
        mertens_via_g_pi(50, g, PrimeCountTable(40))


def test_mertens_via_G_over_primes_examples():
    s = build_series(100, CheckpointPolicy(kind="all"))
    assert mertens_via_G_over_primes(2, s) == 0
    assert mertens_via_G_over_primes(4, s) == -1
    for x in range(1, 101):
        assert mertens_via_G_over_primes(x, s) == mertens_oracle(x)


def test_mertens_identities_spot_1e6():
    s = build_series(10**6, CheckpointPolicy(kind="explicit", points=(10**5,)))
    g = g_table(10**6)
    pt = PrimeCountTable(10**6)
    for x in (10**5, 10**6):
        expect = MERTENS_AT_POW10[x]
        assert mertens_via_g_pi(x, g, pt) == expect
        assert mertens_via_G_over_primes(x, s) == expect


def test_mertens_uncovered_point_raises():
    s = build_series(10**4, CheckpointPolicy(kind="explicit", points=(10**4,)))
    with pytest.raises(RangeCoverageError):
        mertens_via_G_over_primes(9973, s)  # not a checkpoint, not in closure


def test_q_hat_examples(profile_1e4):
    assert q_hat(1, 10, profile_1e4) == -1   # equals M(10)
    assert q_hat(2, 10, profile_1e4) == 1    # liouville(2) flips the sign
    assert q_hat(4, 10, profile_1e4) == -1   # liouville(4) = +1
    with pytest.raises(ValueError):
        q_hat(0, 10, profile_1e4)


def test_q_hat_equals_signed_mertens(profile_1e4):
    # lambda(n) mu^2 = mu pointwise, so the sum collapses to lambda(n) M(x)
    p = profile_1e4
    m = np.concatenate([[0], np.cumsum(mobius_block_oracle(1000)[1:])])
    for n in range(1, 1001):
        lam = int(p.liouville[n - 1])
        assert q_hat(n, 1000, p) == lam * int(m[1000])
    for x in range(1, 1001):
        assert q_hat(1, x, p) == int(m[x])
        assert q_hat(2, x, p) == -int(m[x])


def test_double_sum_small(profile_1e4):
    assert g_via_double_sum(1, profile_1e4) == 1
    assert g_via_double_sum(4, profile_1e4) == -1
    g = g_recursion_oracle(300)
    total = 0
    for x in range(1, 301):
        total += g[x]
        assert g_via_double_sum(x, profile_1e4) == total


def test_u_column_ties_to_g_by_divisor_identity():
    # g * 1 = liouville . c_omega pointwise, so summing both sides gives
    # U(x) = sum_{d <= x} g(d) floor(x/d): an extra exact triangulation of
    # the quotient-route inputs against the inverse table
    N = 10**4
    s = build_series(N, CheckpointPolicy(kind="explicit", points=(77, 4096)))
    g = g_table(N)
    for x in (77, 4096, N):
        direct = int((g[1 : x + 1] * (x // np.arange(1, x + 1))).sum())
        assert s.u_at(x) == direct


def test_routes_agree_on_irregular_inputs():
    rng = np.random.default_rng(21)
    for _ in range(8):
        N = int(rng.integers(17, 30000))
        kind = rng.choice(["all", "geometric", "explicit"])
        if kind == "explicit":
            pts = tuple(sorted(set(map(int, rng.integers(1, N + 1, size=5)))))
            pol = CheckpointPolicy(kind="explicit", points=pts)
        elif kind == "geometric":
            pol = CheckpointPolicy(kind="geometric", ratio=float(rng.uniform(1.1, 3.0)))
        else:
            pol = CheckpointPolicy(kind="all")
        direct = build_series(N, pol)
        quot = build_series(N, pol, direct_g_limit=16)
        for col in ("checkpoints", "M", "G", "Qsq", "pi"):
            assert np.array_equal(getattr(direct, col), getattr(quot, col)), (N, pol)


def test_csv_round_trip():
    s = build_series(10**4, CheckpointPolicy())
    buf = io.StringIO()
    s.to_csv(buf)
    buf.seek(0)
    rows = SummatoryRows.from_csv(buf)
    for col in ("checkpoints", "M", "G", "Qsq", "pi"):
        assert np.array_equal(getattr(rows, col), getattr(s, col))


def test_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        SummatoryRows.from_csv(io.StringIO("a,b,c\n1,2,3\n"))
