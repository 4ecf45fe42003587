"""Exact binomial-moment inequalities, sup-ratio expectations, the block
construction, and the exponent comparison delta <= C*sqrt(eps).

Everything checkable in exact arithmetic is checked in exact arithmetic;
transcendental right-hand sides go through interval comparison; Monte Carlo
enters only for sup-ratio instances beyond the enumeration budget, with a
counter-based generator so results never depend on scheduling.
"""

from __future__ import annotations

import itertools
import math
import struct
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from hashlib import blake2b
from typing import Optional

from .errors import BadParams, BudgetExceeded, InvariantViolated, Undecidable
from .numerics import (
    DEFAULT_MAX_BITS,
    DEFAULT_START_BITS,
    PI,
    BoundExpr,
    Exp,
    Mul,
    Ordering,
    Pow,
    Rat,
    binom,
    binom_pmf,
    cmp_bound,
)
from .subsetsum import ConcentrationReport, CubeSet

DEFAULT_ENUM_BUDGET = 10**7
DEFAULT_C = 20.0


class Verdict(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDABLE = "undecidable"


def coordinate_ratio(x_i: int, a_i: int, k: int) -> Fraction:
    """Likelihood ratio P[Bin(k) = x-a] / P[Bin(k) = x] for a single
    coordinate; 1 when the shift a is 0, x/(k+1-x) when it is 1."""
    if not 0 <= x_i <= k:
        raise BadParams(f"x={x_i} outside 0..{k}")
    if a_i not in (0, 1):
        raise BadParams(f"shift a={a_i} must be 0 or 1")
    if a_i == 0:
        return Fraction(1)
    return Fraction(x_i, k + 1 - x_i)


def ratio_moment(k: int, s: int) -> Fraction:
    """Exact E[(x/(k+1-x))^s] for x ~ Bin(k)."""
    if k < 1 or s < 1:
        raise BadParams("k and s must be >= 1")
    total = Fraction(0)
    for x in range(k + 1):
        total += Fraction(x, k + 1 - x) ** s * binom_pmf(k, x)
    return total


@dataclass(frozen=True)
class MomentRecord:
    k: int
    s: int
    lhs: Fraction
    rhs: BoundExpr
    verdict: Verdict
    in_hypothesis: bool


def check_initial_bound(
    k: int,
    s: int,
    *,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
) -> MomentRecord:
    """Compare the exact ratio moment against exp(10*pi*s^2/k) + 2k^s(4/5)^k.

    The hypothesis flag marks s <= k/(16*pi), decided exactly by interval
    comparison of k/(16s) with pi; a failing verdict is only ever legitimate
    outside that regime.
    """
    if k < 1 or s < 1:
        raise BadParams("k and s must be >= 1")
    lhs = ratio_moment(k, s)
    rhs = Exp(Mul(Rat(Fraction(10 * s * s, k)), PI)) + Rat(
        2 * k**s * Fraction(4, 5) ** k
    )
    in_hypothesis = (
        cmp_bound(Fraction(k, 16 * s), PI, start_bits=start_bits, max_bits=max_bits)
        is Ordering.GREATER
    )
    try:
        order = cmp_bound(lhs, rhs, start_bits=start_bits, max_bits=max_bits)
    except Undecidable:
        verdict = Verdict.UNDECIDABLE
    else:
        verdict = Verdict.HOLDS if order is not Ordering.GREATER else Verdict.FAILS
    return MomentRecord(
        k=k, s=s, lhs=lhs, rhs=rhs, verdict=verdict, in_hypothesis=in_hypothesis
    )


@dataclass(frozen=True)
class SecondMomentRecord:
    k: int
    lhs: Fraction
    mid: Fraction
    verdict: Verdict


def second_moment_identity(k: int) -> SecondMomentRecord:
    """Exactly verify the second-moment chain for Bin(k), k >= 3:
    (i) E[x^2/(k+1-x)^2] equals the shifted-index sum, (ii) it dominates
    (k+2)/k - (3k+4)/(k*2^k), and (iii) that quantity is >= 1."""
    if k < 3:
        raise BadParams("k must be >= 3")
    lhs = ratio_moment(k, 2)
    shifted = sum(
        (Fraction(l + 1, k - l) * binom_pmf(k, l) for l in range(k)),
        Fraction(0),
    )
    mid = Fraction(k + 2, k) - Fraction(3 * k + 4, k) * Fraction(1, 1 << k)
    ok = lhs == shifted and lhs >= mid and mid >= 1
    return SecondMomentRecord(
        k=k, lhs=lhs, mid=mid, verdict=Verdict.HOLDS if ok else Verdict.FAILS
    )


def tail_check(k: int) -> Verdict:
    """Exactly verify P[|x - k/2| >= k/3] <= 2*(4/5)^k for x ~ Bin(k)."""
    if k < 1:
        raise BadParams("k must be >= 1")
    tail = Fraction(0)
    for x in range(k + 1):
        if 3 * abs(2 * x - k) >= 2 * k:
            tail += binom_pmf(k, x)
    rhs = Mul(Rat(Fraction(2)), Pow(Rat(Fraction(4, 5)), Fraction(k)))
    return Verdict.HOLDS if cmp_bound(tail, rhs) is not Ordering.GREATER else Verdict.FAILS


def max_ratio_bound(k: int) -> Verdict:
    """Exactly verify max over l of max{C(k,l-1), C(k,l)} / C(k,l) <= k."""
    if k < 2:
        raise BadParams("k must be >= 2")
    best = max(
        Fraction(max(binom(k, l - 1), binom(k, l)), binom(k, l))
        for l in range(k + 1)
    )
    return Verdict.HOLDS if best <= k else Verdict.FAILS


def _ratio_table(k: int) -> list:
    return [Fraction(x, k + 1 - x) for x in range(k + 1)]


def _supports(A: CubeSet) -> list:
    return [tuple(i for i, ai in enumerate(a) if ai) for a in A]


def sup_ratio_exact(
    A: CubeSet, k: int, *, budget: int = DEFAULT_ENUM_BUDGET
) -> Fraction:
    """Exact E over x ~ Bin(k)^n of sup_{a in A} of the shifted-mass ratio.

    Full enumeration of {0,...,k}^n with product binomial weights; the
    integrand is also checked pointwise against its k^n cap."""
    if k < 1:
        raise BadParams("k must be >= 1")
    n = A.n
    if (k + 1) ** n > budget:
        raise BudgetExceeded(f"(k+1)^n = {(k + 1) ** n} exceeds budget {budget}")
    ratios = _ratio_table(k)
    pmf = [binom_pmf(k, x) for x in range(k + 1)]
    supports = _supports(A)
    cap = Fraction(k) ** n
    total = Fraction(0)
    for x in itertools.product(range(k + 1), repeat=n):
        sup = Fraction(0)
        for sup_idx in supports:
            v = Fraction(1)
            for i in sup_idx:
                v *= ratios[x[i]]
            if v > sup:
                sup = v
        if sup > cap:
            raise InvariantViolated(
                f"integrand {sup} exceeds k^n = {cap}", witness=x
            )
        weight = Fraction(1)
        for xi in x:
            weight *= pmf[xi]
        total += weight * sup
    return total


def cube_set_id(A: CubeSet) -> str:
    """Stable short identifier of a cube set's exact contents."""
    h = blake2b(digest_size=8)
    h.update(struct.pack(">I", A.n))
    for v in A:
        h.update(bytes(v))
    return h.hexdigest()


_BLOCK_BITS = 512


def _binomial_draw(seed: int, sample: int, coord: int, k: int) -> int:
    """Bin(k) draw from k fair hash bits keyed by (seed, sample, coordinate).

    Counter-based: any sample can be generated in isolation, so parallel
    schedules and replays always see identical streams.
    """
    x = 0
    remaining = k
    block = 0
    while remaining > 0:
        digest = blake2b(
            struct.pack(">QQQQ", seed & (2**64 - 1), sample, coord, block),
            digest_size=64,
        ).digest()
        take = min(remaining, _BLOCK_BITS)
        bits = int.from_bytes(digest, "big") >> (_BLOCK_BITS - take)
        x += bits.bit_count()
        remaining -= take
        block += 1
    return x


@dataclass(frozen=True)
class SupRatioEstimate:
    n: int
    k: int
    a_set_id: str
    mean: float
    std_error: float
    samples: int
    exact: Optional[Fraction] = None


def sup_ratio_mc(A: CubeSet, k: int, samples: int, seed: int) -> SupRatioEstimate:
    """Monte Carlo estimate of the sup-ratio expectation.

    Accumulation is exact (rational), so the reported mean and standard
    error are bit-identical for a given (seed, samples) no matter how the
    work would be scheduled.
    """
    if k < 1:
        raise BadParams("k must be >= 1")
    if samples < 1:
        raise BadParams("samples must be >= 1")
    n = A.n
    ratios = _ratio_table(k)
    supports = _supports(A)
    s1 = Fraction(0)
    s2 = Fraction(0)
    for t in range(samples):
        x = [_binomial_draw(seed, t, i, k) for i in range(n)]
        sup = Fraction(0)
        for sup_idx in supports:
            v = Fraction(1)
            for i in sup_idx:
                v *= ratios[x[i]]
            if v > sup:
                sup = v
        s1 += sup
        s2 += sup * sup
    mean = s1 / samples
    if samples > 1:
        variance = (s2 - s1 * s1 / samples) / (samples - 1)
    else:
        variance = Fraction(0)
    std_error = math.sqrt(float(variance / samples))
    return SupRatioEstimate(
        n=n,
        k=k,
        a_set_id=cube_set_id(A),
        mean=float(mean),
        std_error=std_error,
        samples=samples,
    )


@dataclass(frozen=True)
class SupRatioBoundReport:
    n: int
    k: int
    c: float
    delta: float
    method: str
    value: float
    std_error: float
    bound: float
    margin: float
    holds: bool
    exact: Optional[Fraction] = None
    samples: Optional[int] = None
    seed: Optional[int] = None


def check_sup_ratio_bound(
    A: CubeSet,
    k: int,
    C: float = DEFAULT_C,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    samples: int = 10**5,
    seed: int = 0,
) -> SupRatioBoundReport:
    """Compare the sup-ratio expectation against exp(C*(1/k + sqrt(d/k))*n)
    where d = ln|A|/n.  The constant is a free parameter, so the outcome is
    reported with its margin rather than asserted."""
    if len(A) < 1:
        raise BadParams("A must be nonempty")
    if k < 1:
        raise BadParams("k must be >= 1")
    n = A.n
    delta = math.log(len(A)) / n
    bound = math.exp(C * (1 / k + math.sqrt(delta / k)) * n)
    if (k + 1) ** n <= budget:
        exact = sup_ratio_exact(A, k, budget=budget)
        value, std_error = float(exact), 0.0
        method = "exact"
        mc_samples = mc_seed = None
    else:
        est = sup_ratio_mc(A, k, samples, seed)
        exact = None
        value, std_error = est.mean, est.std_error
        method = "mc"
        mc_samples, mc_seed = samples, seed
    return SupRatioBoundReport(
        n=n,
        k=k,
        c=C,
        delta=delta,
        method=method,
        value=value,
        std_error=std_error,
        bound=bound,
        margin=bound - value,
        holds=value <= bound,
        exact=exact,
        samples=mc_samples,
        seed=mc_seed,
    )


@dataclass(frozen=True)
class BlockParams:
    n: int
    k: int
    weights: tuple


def block_construction(n: int, k: int) -> BlockParams:
    """The n/k-block vector: value (k+1)^(i-1) repeated k times per block.

    Base k+1 makes each block occupy its own digit: a block of k equal
    weights contributes 0..k to one digit with no carries, so blocks never
    interact."""
    if n < 1 or k < 1:
        raise BadParams("n and k must be >= 1")
    if n % k:
        raise BadParams(f"k={k} must divide n={n}")
    weights = []
    for i in range(n // k):
        weights.extend([(k + 1) ** i] * k)
    return BlockParams(n=n, k=k, weights=tuple(weights))


@dataclass(frozen=True)
class BlockTheory:
    rho: Fraction
    range_size: int


def block_theory(n: int, k: int) -> BlockTheory:
    """Closed-form rho and range for the block vector, from digit
    independence: each block has the Bin(k) profile on its own digit."""
    if n < 1 or k < 1:
        raise BadParams("n and k must be >= 1")
    if n % k:
        raise BadParams(f"k={k} must divide n={n}")
    blocks = n // k
    rho = Fraction(binom(k, k // 2), 1 << k) ** blocks
    return BlockTheory(rho=rho, range_size=(k + 1) ** blocks)


@dataclass(frozen=True)
class TheoremCheck:
    delta: float
    epsilon: float
    bound: float
    holds: bool


def theorem_check(rep: ConcentrationReport, C: float = DEFAULT_C) -> TheoremCheck:
    """Report whether delta <= C*sqrt(eps), with eps clamped below at 1/n^2
    (outside that range the exponent relation is vacuous)."""
    eps = max(rep.epsilon, 1.0 / rep.n**2)
    bound = C * math.sqrt(eps)
    return TheoremCheck(
        delta=rep.delta, epsilon=eps, bound=bound, holds=rep.delta <= bound
    )
