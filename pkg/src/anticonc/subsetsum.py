"""Exact subset-sum profiles, concentration, range, and cube-set extraction.

For an integer weight vector w of length n, the profile is the exact multiset
{sum -> count} of all 2^n subset sums.  Three independent algorithms produce
it (full enumeration, an offset table over the sum range, meet in the middle)
and must agree bit for bit; concentration rho, the range size, the Levy
window maximum, fibers, and canonical per-sum representatives all derive
from it.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BadParams, CapacityExceeded, TooLarge

Weights = tuple  # tuple of int, length >= 1

DEFAULT_NAIVE_CAP = 24
DEFAULT_DP_CAPACITY = 10**7
DEFAULT_MITM_CAP = 2 * DEFAULT_NAIVE_CAP


def as_weights(entries: Iterable) -> Weights:
    """Validate and normalize a weight vector to a tuple of ints."""
    out = []
    for e in entries:
        if isinstance(e, Fraction):
            if e.denominator != 1:
                raise BadParams(f"weight {e} is not an integer")
            e = e.numerator
        if isinstance(e, bool) or not isinstance(e, int):
            raise BadParams(f"weight {e!r} is not an integer")
        out.append(e)
    if not out:
        raise BadParams("weight vector must have length >= 1")
    return tuple(out)


@dataclass(frozen=True)
class SumProfile:
    """Sorted exact multiset of the 2^n subset sums of a weight vector."""

    n: int
    sums: tuple
    counts: tuple

    def __post_init__(self):
        if len(self.sums) != len(self.counts):
            raise BadParams("sums and counts must align")
        if any(a >= b for a, b in zip(self.sums, self.sums[1:])):
            raise BadParams("sums must be strictly increasing")
        if any(c < 1 for c in self.counts):
            raise BadParams("counts must be >= 1")
        if sum(self.counts) != 1 << self.n:
            raise BadParams("counts must total 2^n")

    @classmethod
    def from_counts(cls, n: int, counts: dict) -> "SumProfile":
        sums = tuple(sorted(counts))
        return cls(n=n, sums=sums, counts=tuple(counts[s] for s in sums))

    def items(self) -> Iterator[tuple]:
        return zip(self.sums, self.counts)

    def as_dict(self) -> dict:
        return dict(self.items())

    @property
    def range_size(self) -> int:
        return len(self.sums)

    @property
    def total(self) -> int:
        return 1 << self.n


@dataclass(frozen=True)
class ConcentrationReport:
    """rho with its witness sum, the range size, and the log exponents.

    epsilon = ln(1/rho)/n and delta = ln|R|/n; the exact rho is kept so
    downstream checks never depend on the float companions.
    """

    n: int
    rho: Fraction
    tau: int
    range_size: int
    epsilon: float
    delta: float


@dataclass(frozen=True)
class CubeSet:
    """An explicit subset of {0,1}^n."""

    n: int
    vectors: frozenset

    @classmethod
    def from_vectors(cls, n: int, vectors: Iterable) -> "CubeSet":
        vecs = frozenset(tuple(v) for v in vectors)
        for v in vecs:
            if len(v) != n or any(x not in (0, 1) for x in v):
                raise BadParams(f"{v} is not a 0/1 vector of length {n}")
        return cls(n=n, vectors=vecs)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(sorted(self.vectors))

    def __contains__(self, v):
        return tuple(v) in self.vectors


def profile_naive(w: Weights, *, cap: int = DEFAULT_NAIVE_CAP) -> SumProfile:
    """Profile by enumerating all 2^n subset sums (the defining computation)."""
    w = as_weights(w)
    n = len(w)
    if n > cap:
        raise TooLarge(f"n={n} exceeds enumeration cap {cap}")
    sums = [0]
    for wi in w:
        sums += [s + wi for s in sums]
    return SumProfile.from_counts(n, Counter(sums))


def profile_dp(w: Weights, *, capacity: int = DEFAULT_DP_CAPACITY) -> SumProfile:
    """Profile via a count table over the integer sum range.

    The table spans [-sum of negative magnitudes, sum of positives]; each
    item folds in as a shifted add, so the cost is n times the table width
    rather than 2^n.
    """
    w = as_weights(w)
    n = len(w)
    neg = -sum(wi for wi in w if wi < 0)
    pos = sum(wi for wi in w if wi > 0)
    span = pos + neg
    if span > capacity:
        raise CapacityExceeded(f"sum range width {span} exceeds capacity {capacity}")
    counts = [0] * (span + 1)
    counts[neg] = 1  # empty subset; index = sum + neg
    for wi in w:
        if wi == 0:
            for j in range(span + 1):
                counts[j] += counts[j]
        elif wi > 0:
            for j in range(span, wi - 1, -1):
                counts[j] += counts[j - wi]
        else:
            for j in range(span + wi + 1):
                counts[j] += counts[j - wi]
    return SumProfile.from_counts(
        n, {j - neg: c for j, c in enumerate(counts) if c}
    )


def _half_counts(w: Sequence) -> dict:
    sums = [0]
    for wi in w:
        sums += [s + wi for s in sums]
    return Counter(sums)


def profile_mitm(w: Weights, *, cap: int = DEFAULT_MITM_CAP) -> SumProfile:
    """Profile by meet in the middle: profile both halves, then convolve.

    The convolution walks distinct half-sums only, so vectors with heavy
    collisions cost far less than 2^n.
    """
    w = as_weights(w)
    n = len(w)
    if n > cap:
        raise TooLarge(f"n={n} exceeds meet-in-the-middle cap {cap}")
    left = _half_counts(w[: n // 2])
    right = _half_counts(w[n // 2 :])
    acc: dict = {}
    get = acc.get
    for s1, c1 in left.items():
        for s2, c2 in right.items():
            s = s1 + s2
            acc[s] = get(s, 0) + c1 * c2
    return SumProfile.from_counts(n, acc)


def profile(
    w: Weights,
    algorithm: str = "auto",
    *,
    naive_cap: int = DEFAULT_NAIVE_CAP,
    dp_capacity: int = DEFAULT_DP_CAPACITY,
    mitm_cap: int = DEFAULT_MITM_CAP,
) -> SumProfile:
    """Route to a profile algorithm; "auto" picks the cheapest feasible one
    by worst-case operation count (2^n for the enumerators, n*span for the
    table), so wide-span vectors go to meet-in-the-middle and sparse-span
    ones to the table."""
    w = as_weights(w)
    if algorithm == "naive":
        return profile_naive(w, cap=naive_cap)
    if algorithm == "dp":
        return profile_dp(w, capacity=dp_capacity)
    if algorithm == "mitm":
        return profile_mitm(w, cap=mitm_cap)
    if algorithm != "auto":
        raise BadParams(f"unknown algorithm {algorithm!r}")
    n = len(w)
    span = sum(abs(wi) for wi in w) + 1
    dp_cost = n * span if span <= dp_capacity else None
    enum_cost = 2**n if n <= max(naive_cap, mitm_cap) else None
    if dp_cost is not None and (enum_cost is None or dp_cost <= enum_cost):
        return profile_dp(w, capacity=dp_capacity)
    if n <= naive_cap:
        return profile_naive(w, cap=naive_cap)
    if n <= mitm_cap:
        return profile_mitm(w, cap=mitm_cap)
    raise TooLarge(f"n={len(w)} exceeds every configured cap")


def concentration(p: SumProfile) -> ConcentrationReport:
    """Largest fiber mass rho, its smallest witness sum, and the exponents."""
    maxc = max(p.counts)
    tau = next(s for s, c in p.items() if c == maxc)
    rho = Fraction(maxc, p.total)
    n = p.n
    epsilon = (math.log(rho.denominator) - math.log(rho.numerator)) / n
    delta = math.log(p.range_size) / n
    return ConcentrationReport(
        n=n,
        rho=rho,
        tau=tau,
        range_size=p.range_size,
        epsilon=epsilon,
        delta=delta,
    )


def levy(p: SumProfile, r) -> tuple:
    """Maximum probability mass in a closed window of radius r, with witness.

    Slides the window over the sorted sums; the returned tau is the midpoint
    of the extreme sums covered by the best window (smallest on ties).
    """
    r = Fraction(r)
    if r < 0:
        raise BadParams("window radius must be >= 0")
    sums, counts = p.sums, p.counts
    m = len(sums)
    prefix = [0] * (m + 1)
    for i, c in enumerate(counts):
        prefix[i + 1] = prefix[i] + c
    width = 2 * r
    best, best_tau = -1, None
    j = 0
    for i in range(m):
        if j < i:
            j = i
        while j + 1 < m and sums[j + 1] - sums[i] <= width:
            j += 1
        mass = prefix[j + 1] - prefix[i]
        if mass > best:  # midpoints are nondecreasing in i, so first max wins
            best = mass
            best_tau = Fraction(sums[i] + sums[j], 2)
    return best_tau, Fraction(best, p.total)


def _lex_mask_sums(w: Weights) -> list:
    """Subset sums indexed by mask, where ascending mask order equals
    ascending lexicographic order of (xi_1, ..., xi_n) with coordinate 1
    most significant."""
    n = len(w)
    # bit j of the mask (from the low end) holds coordinate n - j
    weight_of_bit = [w[n - 1 - j] for j in range(n)]
    sums = [0] * (1 << n)
    for m in range(1, 1 << n):
        low = m & -m
        sums[m] = sums[m ^ low] + weight_of_bit[low.bit_length() - 1]
    return sums


def _mask_vector(m: int, n: int) -> tuple:
    return tuple((m >> (n - 1 - i)) & 1 for i in range(n))


def fiber(w: Weights, tau, *, cap: int = DEFAULT_NAIVE_CAP) -> CubeSet:
    """All 0/1 vectors whose weighted sum equals tau (possibly empty)."""
    w = as_weights(w)
    n = len(w)
    if n > cap:
        raise TooLarge(f"n={n} exceeds enumeration cap {cap}")
    sums = _lex_mask_sums(w)
    vectors = [_mask_vector(m, n) for m, s in enumerate(sums) if s == tau]
    return CubeSet(n=n, vectors=frozenset(vectors))


def unique_preimages(w: Weights, *, cap: int = DEFAULT_NAIVE_CAP) -> CubeSet:
    """One representative per attained sum: the lexicographically smallest
    preimage, coordinate 1 most significant, 0 before 1."""
    w = as_weights(w)
    n = len(w)
    if n > cap:
        raise TooLarge(f"n={n} exceeds enumeration cap {cap}")
    sums = _lex_mask_sums(w)
    chosen: dict = {}
    for m, s in enumerate(sums):
        if s not in chosen:
            chosen[s] = m
    vectors = [_mask_vector(m, n) for m in chosen.values()]
    return CubeSet(n=n, vectors=frozenset(vectors))
