"""Iterated sumsets k*B with multiplicities, injectivity, and density checks.

B lives in {0,1}^n, so every k-fold sum lands in {0,...,k}^n and every
A-shifted sum in {0,...,k+1}^n.  Vectors are stored under fixed-radix integer
keys with radix k+2: digits never carry, so vector addition is plain integer
addition of keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .errors import BadParams, BudgetExceeded
from .numerics import binom
from .subsetsum import CubeSet

DEFAULT_TUPLE_BUDGET = 10**8


def _encode(vec, radix: int) -> int:
    key = 0
    for x in reversed(vec):
        key = key * radix + x
    return key


def _decode(key: int, radix: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        key, d = divmod(key, radix)
        out.append(d)
    return tuple(out)


@dataclass(frozen=True, eq=True)
class MultiSumset:
    """k*B with multiplicity mu(c) = number of k-tuples of B summing to c."""

    n: int
    k: int
    entries: dict  # radix-(k+2) key -> multiplicity

    __hash__ = None  # entries is a dict; value equality only

    @property
    def radix(self) -> int:
        return self.k + 2

    @property
    def support_size(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def multiplicity(self, vec) -> int:
        return self.entries.get(_encode(vec, self.radix), 0)

    def items(self) -> Iterator[tuple]:
        """Yield (vector, multiplicity) in ascending lexicographic order."""
        radix = self.radix
        decoded = [_decode(key, radix, self.n) for key in self.entries]
        for vec in sorted(decoded):
            yield vec, self.entries[_encode(vec, radix)]

    def vectors(self) -> list:
        return [v for v, _ in self.items()]

    def as_dict(self) -> dict:
        return dict(self.items())


def _charge(used: int, extra: int, budget: int) -> int:
    used += extra
    if used > budget:
        raise BudgetExceeded(f"enumeration work {used} exceeds budget {budget}")
    return used


def iterated_sumset(
    B: CubeSet, k: int, *, budget: int = DEFAULT_TUPLE_BUDGET
) -> MultiSumset:
    """Build k*B by k-1 sparse convolutions of B's indicator."""
    if k < 1:
        raise BadParams("k must be >= 1")
    radix = k + 2
    keys = sorted(_encode(v, radix) for v in B.vectors)
    acc = {key: 1 for key in keys}
    used = _charge(0, len(keys), budget)
    for _ in range(k - 1):
        used = _charge(used, len(acc) * len(keys), budget)
        nxt: dict = {}
        get = nxt.get
        for key, mult in acc.items():
            for b in keys:
                s = key + b  # no digit carries: every digit stays <= k
                nxt[s] = get(s, 0) + mult
        acc = nxt
    return MultiSumset(n=B.n, k=k, entries=acc)


def iterated_sumset_by_enumeration(
    B: CubeSet, k: int, *, budget: int = DEFAULT_TUPLE_BUDGET
) -> MultiSumset:
    """Build k*B by walking all |B|^k tuples; cross-check for the convolution."""
    if k < 1:
        raise BadParams("k must be >= 1")
    if len(B) ** k > budget:
        raise BudgetExceeded(f"|B|^k = {len(B) ** k} exceeds budget {budget}")
    radix = k + 2
    keys = sorted(_encode(v, radix) for v in B.vectors)
    entries: dict = {}
    stack = [0]
    for _ in range(k):
        stack = [s + b for s in stack for b in keys]
    for s in stack:
        entries[s] = entries.get(s, 0) + 1
    return MultiSumset(n=B.n, k=k, entries=entries)


@dataclass(frozen=True)
class InjectivityResult:
    """Whether (a, c) -> a + c is injective on A x (k*B), with a witness
    pair of distinct colliding preimages when it is not."""

    holds: bool
    witness: Optional[tuple] = None


def check_injectivity(
    A: CubeSet, B: CubeSet, k: int, *, budget: int = DEFAULT_TUPLE_BUDGET
) -> InjectivityResult:
    """Decide |A + k*B| = |A| * |k*B| by exhaustive collision search."""
    if A.n != B.n:
        raise BadParams("A and B must live in the same dimension")
    ms = iterated_sumset(B, k, budget=budget)
    _charge(0, len(A) * ms.support_size, budget)
    radix = ms.radix
    a_keys = sorted(_encode(a, radix) for a in A.vectors)
    seen: dict = {}
    for akey in a_keys:
        for ckey in ms.entries:
            s = akey + ckey
            prev = seen.get(s)
            if prev is None:
                seen[s] = (akey, ckey)
            elif prev != (akey, ckey):
                witness = (
                    (_decode(prev[0], radix, A.n), _decode(prev[1], radix, A.n)),
                    (_decode(akey, radix, A.n), _decode(ckey, radix, A.n)),
                )
                return InjectivityResult(holds=False, witness=witness)
    return InjectivityResult(holds=True)


def density_ratio_max(
    B: CubeSet, k: int, *, budget: int = DEFAULT_TUPLE_BUDGET
) -> Fraction:
    """Largest density of mu_k against the product binomial measure.

    mu_k(c)/|B|^k is compared with prod_i C(k, c_i)/2^k over the support;
    the whole computation stays rational.
    """
    if len(B) == 0:
        raise BadParams("B must be nonempty")
    ms = iterated_sumset(B, k, budget=budget)
    bk = len(B) ** k
    shift = 1 << (k * B.n)  # 1 / prod_i 2^-k
    best = Fraction(0)
    for vec, mult in ms.items():
        denom = 1
        for c in vec:
            denom *= binom(k, c)
        ratio = Fraction(mult * shift, bk * denom)
        if ratio > best:
            best = ratio
    return best


def partition_total(
    A: CubeSet, B: CubeSet, k: int, *, budget: int = DEFAULT_TUPLE_BUDGET
) -> Fraction:
    """Probability that a uniform a in A plus k uniform B-draws stays in
    {0,...,k+1}^n; the box always captures everything, and the value is
    computed honestly by coordinate checks rather than assumed."""
    if A.n != B.n:
        raise BadParams("A and B must live in the same dimension")
    if len(A) == 0 or len(B) == 0:
        raise BadParams("A and B must be nonempty")
    ms = iterated_sumset(B, k, budget=budget)
    _charge(0, len(A) * ms.support_size, budget)
    sumset_items = list(ms.items())
    hit = 0
    for a in A:
        for cvec, mult in sumset_items:
            if all(0 <= ai + ci <= k + 1 for ai, ci in zip(a, cvec)):
                hit += mult
    return Fraction(hit, len(A) * len(B) ** k)
