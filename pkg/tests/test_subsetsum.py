from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anticonc.errors import BadParams, CapacityExceeded, TooLarge
from anticonc.subsetsum import (
    SumProfile,
    as_weights,
    concentration,
    fiber,
    levy,
    profile,
    profile_dp,
    profile_mitm,
    profile_naive,
    unique_preimages,
)
from conftest import brute_profile, brute_rho_tau_range

weights_st = st.lists(
    st.integers(min_value=-30, max_value=30), min_size=1, max_size=10
).map(tuple)


def test_as_weights():
    assert as_weights([1, -2, 0]) == (1, -2, 0)
    assert as_weights([Fraction(4, 2)]) == (2,)
    with pytest.raises(BadParams):
        as_weights([])
    with pytest.raises(BadParams):
        as_weights([1.5])
    with pytest.raises(BadParams):
        as_weights([Fraction(1, 2)])
    with pytest.raises(BadParams):
        as_weights([True])


def test_profile_examples():
    assert profile_naive((0, 0, 0)).as_dict() == {0: 8}
    assert profile_naive((1, 10, 100)).as_dict() == {
        s: 1 for s in (0, 1, 10, 11, 100, 101, 110, 111)
    }
    assert profile_naive((1, 1, 1)).as_dict() == {0: 1, 1: 3, 2: 3, 3: 1}
    assert profile_dp((1, 1, 1)).as_dict() == {0: 1, 1: 3, 2: 3, 3: 1}
    assert profile_dp((0, 0)).as_dict() == {0: 4}
    assert profile_dp((-1, 1)).as_dict() == {-1: 1, 0: 2, 1: 1}
    assert profile_mitm((1, 1, 1, 1)).as_dict() == {0: 1, 1: 4, 2: 6, 3: 4, 4: 1}
    assert profile_mitm((1, 2, 4, 8)).range_size == 16
    assert profile_mitm((5,)).as_dict() == {0: 1, 5: 1}


def test_profile_caps():
    with pytest.raises(TooLarge):
        profile_naive((1,) * 5, cap=4)
    with pytest.raises(CapacityExceeded):
        profile_dp((100, 100), capacity=150)
    with pytest.raises(TooLarge):
        profile_mitm((1,) * 5, cap=4)
    with pytest.raises(TooLarge):
        profile((1,) * 5, "auto", naive_cap=4, dp_capacity=2, mitm_cap=4)
    with pytest.raises(BadParams):
        profile((1,), "fancy")


def test_profile_auto_routes_around_capacity():
    # sum range too wide for the table, small enough to enumerate
    big = (10**9, 2 * 10**9, 3 * 10**9)
    assert profile(big).as_dict() == brute_profile(big)


@given(weights_st)
@settings(max_examples=80, deadline=None)
def test_profiles_agree_with_oracle(w):
    expected = brute_profile(w)
    assert profile_naive(w).as_dict() == expected
    assert profile_dp(w).as_dict() == expected
    assert profile_mitm(w).as_dict() == expected


@given(weights_st, st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_profile_permutation_invariance(w, rng):
    shuffled = list(w)
    rng.shuffle(shuffled)
    assert profile_dp(w) == profile_dp(tuple(shuffled))


@given(weights_st, st.data())
@settings(max_examples=40, deadline=None)
def test_profile_sign_flip_translates(w, data):
    i = data.draw(st.integers(min_value=0, max_value=len(w) - 1))
    flipped = tuple(-x if j == i else x for j, x in enumerate(w))
    base = profile_dp(w).as_dict()
    moved = profile_dp(flipped).as_dict()
    assert moved == {s - w[i]: c for s, c in base.items()}


@given(weights_st, st.integers(min_value=1, max_value=5))
@settings(max_examples=40, deadline=None)
def test_profile_scaling_preserves_counts(w, m):
    base = profile_dp(w)
    scaled = profile_dp(tuple(m * x for x in w))
    assert scaled.as_dict() == {m * s: c for s, c in base.items()}
    assert concentration(base).rho == concentration(scaled).rho


def test_profile_validation():
    with pytest.raises(BadParams):
        SumProfile(n=2, sums=(0, 1), counts=(1, 2))  # does not total 4
    with pytest.raises(BadParams):
        SumProfile(n=1, sums=(1, 0), counts=(1, 1))  # not increasing


def test_concentration_examples():
    rep = concentration(profile_naive((1, 1, 1)))
    assert (rep.rho, rep.tau, rep.range_size) == (Fraction(3, 8), 1, 4)
    rep = concentration(profile_naive((0,) * 6))
    assert (rep.rho, rep.tau, rep.range_size) == (Fraction(1), 0, 1)
    assert rep.epsilon == rep.delta == 0.0
    rep = concentration(profile_naive((1, 10, 100)))
    assert (rep.rho, rep.tau, rep.range_size) == (Fraction(1, 8), 0, 8)


def test_concentration_tau_tie_break():
    # counts: {-2:1, -1:2, 0:2, 1:2, 2:1}; the smallest max-count sum wins
    rep = concentration(profile_naive((1, 1, -2)))
    assert rep.tau == -1 and rep.rho == Fraction(1, 4)


@given(weights_st)
@settings(max_examples=60, deadline=None)
def test_concentration_matches_oracle(w):
    rep = concentration(profile_dp(w))
    rho, tau, rng = brute_rho_tau_range(w)
    assert (rep.rho, rep.tau, rep.range_size) == (rho, tau, rng)
    assert rep.delta >= rep.epsilon - 1e-12
    assert Fraction(1, 2 ** len(w)) <= rep.rho <= 1


def test_levy_examples():
    p = profile_naive((1, 1, 1))
    assert levy(p, 0) == (Fraction(1), Fraction(3, 8))
    assert levy(p, 1) == (Fraction(1), Fraction(7, 8))
    assert levy(p, 3) == (Fraction(3, 2), Fraction(1))
    assert levy(p, Fraction(1, 2)) == (Fraction(3, 2), Fraction(6, 8))
    with pytest.raises(BadParams):
        levy(p, -1)


@given(weights_st)
@settings(max_examples=40, deadline=None)
def test_levy_radius_zero_is_concentration(w):
    p = profile_dp(w)
    rep = concentration(p)
    tau, prob = levy(p, 0)
    assert prob == rep.rho and tau == rep.tau


@given(weights_st, st.integers(min_value=0, max_value=80))
@settings(max_examples=60, deadline=None)
def test_levy_matches_window_oracle(w, r):
    p = profile_dp(w)
    tau, prob = levy(p, r)
    counts = p.as_dict()
    best = max(
        sum(c for s, c in counts.items() if lo <= s <= lo + 2 * r)
        for lo in counts
    )
    assert prob == Fraction(best, 2 ** len(w))
    covered = sum(c for s, c in counts.items() if abs(s - tau) <= r)
    assert covered == best


def test_fiber_examples():
    assert sorted(fiber((1, 1, 1), 1)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert len(fiber((1, 1, 1), 5)) == 0  # empty fibers are legal CubeSets
    assert sorted(fiber((0, 0), 0)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(TooLarge):
        fiber((1,) * 9, 3, cap=8)


def test_unique_preimages_examples():
    assert sorted(unique_preimages((1, 1, 1))) == [
        (0, 0, 0),
        (0, 0, 1),
        (0, 1, 1),
        (1, 1, 1),
    ]
    assert sorted(unique_preimages((0, 0))) == [(0, 0)]
    assert sorted(unique_preimages((1, 2))) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    # (0,1,0) and (1,0,1) share the sum 4; the lex-smaller one is chosen
    assert (0, 1, 0) in unique_preimages((3, 4, 1))


@given(weights_st)
@settings(max_examples=40, deadline=None)
def test_unique_preimages_lex_minimal(w):
    chosen = {
        sum(a * b for a, b in zip(w, v)): v for v in unique_preimages(w)
    }
    expected = brute_profile(w)
    assert len(chosen) == len(unique_preimages(w)) == len(expected)
    assert set(chosen) == set(expected)
    for v in fiber(w, next(iter(chosen))):
        assert chosen[next(iter(chosen))] <= v


@given(weights_st)
@settings(max_examples=30, deadline=None)
def test_fiber_partitions_cube(w):
    p = profile_dp(w)
    total = 0
    for s, c in p.items():
        fib = fiber(w, s)
        assert len(fib) == c
        total += len(fib)
    assert total == 2 ** len(w)
