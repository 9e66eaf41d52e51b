#!/usr/bin/env python3
# Distributional snapshots: how the factor-count statistics actually behave
# at desk scale, next to their limiting predictions.

import math

from mforge import (
    collect_counts,
    conditional_squarefree,
    d_m_coefficients,
    excess_density,
    omega_k_density,
    prime_exponent_distribution,
    sign_balance,
)

X = 10**6
counts = collect_counts(X)

# How often does n have exactly k prime factors with multiplicity?  The
# prediction (loglog x)^(k-1) / ((log x)(k-1)!) is a main term only; watch
# how loose it still is at 1e6.
print(f"Density of Omega(n) = k over [3, {X}]:")
print(f"{'k':>2} {'count':>8} {'empirical':>10} {'predicted':>10}")
for k in range(1, 7):
    r = omega_k_density(X, k, counts)
    print(f"{k:>2} {r.count:>8} {r.empirical:>10.6f} {r.predicted:>10.6f}")

# The number of repeated factors Omega - omega has a genuine limiting law:
# the coefficients of an Euler product over primes.  Agreement is tight.
dm = d_m_coefficients(10**6, 8)
print(f"\nExcess Omega(n) - omega(n) = m over [1, {X}] "
      f"(product truncated at 1e6, tail < {dm.tail_bound:.0e}):")
print(f"{'m':>2} {'count':>8} {'empirical':>10} {'coefficient':>11}")
for m in range(5):
    r = excess_density(X, m, counts, dm)
    print(f"{m:>2} {r.count:>8} {r.empirical:>10.6f} {r.predicted:>11.6f}")

# Squarefree sign balance: mobius = +1 and -1 are equally common among
# squarefree n, up to a drift that is exactly the Mertens sum.
b = sign_balance(X, counts)
fp, fm = b.fractions
print(f"\nSign balance among {b.squarefree} squarefree n <= {X}: "
      f"+1 fraction {fp:.6f}, -1 fraction {fm:.6f}")

# Conditioning on Omega(n) = k changes the squarefree probability a lot at
# finite x (an idealized independence would make the ratio 1).
print(f"\nP(squarefree | Omega = k) vs unconditional over [3, {X}]:")
for k in (1, 2, 3, 4, 5):
    r = conditional_squarefree(X, k, counts)
    print(f"  k={k}: conditional {r.conditional:.4f}  "
          f"unconditional {r.unconditional:.4f}  ratio {r.ratio:.3f}")

# The exponent of a fixed prime is as close to geometric as counting allows:
# the counts are literally floor(x/p^k) - floor(x/p^(k+1)).
p = 3
print(f"\nExponent of p = {p} over n <= {X} vs geometric (1-1/p) p^-k:")
for r in prime_exponent_distribution(X, p, 4):
    print(f"  k={r.k}: count {r.count:>7}  empirical {r.empirical:.7f}  "
          f"predicted {r.predicted:.7f}")
print(f"  (largest deviation possible from the two floors: 2/{X} = {2/X:.1e})")
