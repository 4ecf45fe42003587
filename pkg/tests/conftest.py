"""Shared test oracles: small, independent reimplementations used to check
the library answers. Everything here enumerates directly over itertools
products, deliberately sharing no code with the package."""

import itertools
import math
from collections import Counter
from fractions import Fraction


def brute_profile(w):
    """Subset-sum profile by plain enumeration of all 0/1 vectors."""
    counts = Counter()
    for xi in itertools.product((0, 1), repeat=len(w)):
        counts[sum(a * b for a, b in zip(w, xi))] += 1
    return dict(counts)


def brute_rho_tau_range(w):
    p = brute_profile(w)
    maxc = max(p.values())
    tau = min(s for s, c in p.items() if c == maxc)
    return Fraction(maxc, 2 ** len(w)), tau, len(p)


def pascal_binom(k, x):
    """Binomial coefficient from the additive recurrence only."""
    if x < 0 or x > k:
        return 0
    row = [1]
    for _ in range(k):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return row[x]


def brute_ksum_counts(B, k):
    """Multiplicities of k-fold sums by walking all |B|^k tuples."""
    counts = Counter()
    for tup in itertools.product(sorted(B), repeat=k):
        counts[tuple(map(sum, zip(*tup)))] += 1
    return dict(counts)


def brute_ratio_moment(k, s):
    """E[(x/(k+1-x))^s] by enumerating all 2^k coin strings."""
    total = Fraction(0)
    for bits in itertools.product((0, 1), repeat=k):
        x = sum(bits)
        total += Fraction(x, k + 1 - x) ** s
    return total / 2**k


def brute_tail(k):
    """P[|x - k/2| >= k/3] by enumerating all 2^k coin strings."""
    hits = 0
    for bits in itertools.product((0, 1), repeat=k):
        x = sum(bits)
        if abs(Fraction(2 * x - k, 2)) >= Fraction(k, 3):
            hits += 1
    return Fraction(hits, 2**k)


def brute_sup_ratio(vectors, k, n):
    """Sup-ratio expectation from an explicit probability table."""
    total = Fraction(0)
    for x in itertools.product(range(k + 1), repeat=n):
        weight = Fraction(1)
        for xi in x:
            weight *= Fraction(math.comb(k, xi), 2**k)
        sup = Fraction(0)
        for a in vectors:
            r = Fraction(1)
            for xi, ai in zip(x, a):
                if ai:
                    r *= Fraction(xi, k + 1 - xi)
            sup = max(sup, r)
        total += weight * sup
    return total


def report(ok, label, **fields):
    """One human-readable pass/fail line per checked criterion."""
    tail = " ".join(f"{k}={v}" for k, v in fields.items())
    print(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{tail}]" if tail else ""))
    return ok
