import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anticonc.errors import BadParams, BudgetExceeded
from anticonc.lemmas import (
    Verdict,
    block_construction,
    block_theory,
    check_initial_bound,
    check_sup_ratio_bound,
    coordinate_ratio,
    cube_set_id,
    max_ratio_bound,
    ratio_moment,
    second_moment_identity,
    sup_ratio_exact,
    sup_ratio_mc,
    tail_check,
    theorem_check,
)
from anticonc.subsetsum import CubeSet, concentration, profile
from conftest import brute_ratio_moment, brute_sup_ratio, brute_tail

small_cube_sets = st.integers(min_value=1, max_value=3).flatmap(
    lambda n: st.sets(
        st.tuples(*([st.integers(min_value=0, max_value=1)] * n)),
        min_size=1,
        max_size=2**n,
    ).map(lambda vs: CubeSet.from_vectors(n, vs))
)


def _cs(*vectors):
    return CubeSet.from_vectors(len(vectors[0]), vectors)


def test_coordinate_ratio():
    assert coordinate_ratio(2, 0, 5) == 1
    assert coordinate_ratio(1, 1, 3) == Fraction(1, 3)
    assert coordinate_ratio(3, 1, 3) == 3
    assert coordinate_ratio(0, 1, 3) == 0
    with pytest.raises(BadParams):
        coordinate_ratio(4, 1, 3)
    with pytest.raises(BadParams):
        coordinate_ratio(1, 2, 3)


def test_ratio_moment_examples():
    assert ratio_moment(1, 1) == Fraction(1, 2)
    assert ratio_moment(3, 1) == Fraction(7, 8)
    assert ratio_moment(3, 2) == Fraction(37, 24)
    with pytest.raises(BadParams):
        ratio_moment(0, 1)
    with pytest.raises(BadParams):
        ratio_moment(3, 0)


@given(
    st.integers(min_value=1, max_value=12), st.integers(min_value=1, max_value=3)
)
@settings(max_examples=30, deadline=None)
def test_ratio_moment_matches_oracle(k, s):
    assert ratio_moment(k, s) == brute_ratio_moment(k, s)


@given(st.integers(min_value=1, max_value=40))
@settings(max_examples=20, deadline=None)
def test_first_ratio_moment_closed_form(k):
    assert ratio_moment(k, 1) == 1 - Fraction(1, 1 << k)


def test_initial_bound_examples():
    rec = check_initial_bound(51, 1)
    assert rec.verdict is Verdict.HOLDS and rec.in_hypothesis
    assert rec.lhs == ratio_moment(51, 1)

    rec = check_initial_bound(50, 1)
    assert not rec.in_hypothesis  # 50/16 < pi

    rec = check_initial_bound(3, 1)
    assert rec.verdict is Verdict.HOLDS and not rec.in_hypothesis

    rec = check_initial_bound(64, 1)
    assert rec.verdict is Verdict.HOLDS and rec.in_hypothesis

    with pytest.raises(BadParams):
        check_initial_bound(0, 1)


def test_initial_bound_hypothesis_region():
    # s <= k/(16*pi): k=256 admits s up to 5, k=128 up to 2
    admitted = [s for s in range(1, 8) if check_initial_bound(256, s).in_hypothesis]
    assert admitted == [1, 2, 3, 4, 5]
    admitted = [s for s in range(1, 5) if check_initial_bound(128, s).in_hypothesis]
    assert admitted == [1, 2]


def test_second_moment_spot():
    rec = second_moment_identity(3)
    assert rec.lhs == Fraction(37, 24)
    assert rec.mid == Fraction(9, 8)
    assert rec.verdict is Verdict.HOLDS
    with pytest.raises(BadParams):
        second_moment_identity(2)


def test_second_moment_range():
    for k in range(3, 61):
        assert second_moment_identity(k).verdict is Verdict.HOLDS


@given(st.integers(min_value=1, max_value=12))
@settings(max_examples=12, deadline=None)
def test_tail_matches_oracle(k):
    tail = brute_tail(k)
    assert tail <= 2 * Fraction(4, 5) ** k
    assert tail_check(k) is Verdict.HOLDS


def test_tail_examples():
    for k in (1, 6, 30, 100):
        assert tail_check(k) is Verdict.HOLDS
    with pytest.raises(BadParams):
        tail_check(0)


def test_max_ratio():
    for k in (2, 3, 10):
        assert max_ratio_bound(k) is Verdict.HOLDS
    with pytest.raises(BadParams):
        max_ratio_bound(1)


def test_sup_ratio_exact_hand_values():
    assert sup_ratio_exact(_cs((0, 0, 0)), 3) == 1
    assert sup_ratio_exact(_cs((1,)), 2) == Fraction(3, 4)
    assert sup_ratio_exact(_cs((0,), (1,)), 2) == Fraction(5, 4)
    assert sup_ratio_exact(CubeSet.from_vectors(2, []), 3) == 0
    with pytest.raises(BudgetExceeded):
        sup_ratio_exact(_cs((1, 1, 1)), 9, budget=100)
    with pytest.raises(BadParams):
        sup_ratio_exact(_cs((1,)), 0)


@given(small_cube_sets, st.integers(min_value=1, max_value=4))
@settings(max_examples=40, deadline=None)
def test_sup_ratio_exact_matches_oracle(a, k):
    got = sup_ratio_exact(a, k)
    assert got == brute_sup_ratio(list(a), k, a.n)
    if (0,) * a.n in a:
        assert got >= 1  # the zero shift contributes ratio 1 everywhere
    assert got <= Fraction(k) ** a.n


@given(small_cube_sets, st.integers(min_value=1, max_value=3))
@settings(max_examples=30, deadline=None)
def test_sup_ratio_monotone_in_a(a, k):
    grown = CubeSet.from_vectors(a.n, set(a) | {(0,) * a.n})
    assert sup_ratio_exact(grown, k) >= sup_ratio_exact(a, k)


def test_cube_set_id_stable():
    a = _cs((0, 1), (1, 0))
    assert cube_set_id(a) == cube_set_id(_cs((1, 0), (0, 1)))
    assert len(cube_set_id(a)) == 16
    assert cube_set_id(a) != cube_set_id(_cs((0, 1)))
    assert cube_set_id(a) != cube_set_id(CubeSet.from_vectors(3, [(0, 1, 0)]))


def test_sup_ratio_mc_constant_case():
    est = sup_ratio_mc(_cs((0, 0)), 3, 500, seed=1)
    assert est.mean == 1.0 and est.std_error == 0.0
    assert est.samples == 500 and est.n == 2 and est.k == 3


def test_sup_ratio_mc_deterministic():
    a = _cs((1, 0), (1, 1))
    e1 = sup_ratio_mc(a, 4, 2000, seed=42)
    e2 = sup_ratio_mc(a, 4, 2000, seed=42)
    assert (e1.mean, e1.std_error) == (e2.mean, e2.std_error)
    e3 = sup_ratio_mc(a, 4, 2000, seed=43)
    assert e3.mean != e1.mean
    with pytest.raises(BadParams):
        sup_ratio_mc(a, 4, 0, seed=1)


def test_sup_ratio_mc_converges():
    a = _cs((0, 1), (1, 0), (1, 1))
    exact = float(sup_ratio_exact(a, 4))
    est = sup_ratio_mc(a, 4, 10_000, seed=7)
    assert abs(est.mean - exact) <= 3 * est.std_error
    assert est.a_set_id == cube_set_id(a)


def test_check_sup_ratio_bound_exact_and_mc():
    a = _cs((0, 1), (1, 1))
    rep = check_sup_ratio_bound(a, 3, C=20.0)
    assert rep.method == "exact" and rep.std_error == 0.0
    assert rep.exact == sup_ratio_exact(a, 3)
    assert rep.value == float(rep.exact)
    assert rep.holds == (rep.value <= rep.bound)
    assert rep.margin == rep.bound - rep.value

    rep = check_sup_ratio_bound(a, 3, C=20.0, budget=2, samples=300, seed=5)
    assert rep.method == "mc" and rep.exact is None
    assert rep.samples == 300 and rep.seed == 5

    with pytest.raises(BadParams):
        check_sup_ratio_bound(CubeSet.from_vectors(2, []), 3)


def test_block_construction_examples():
    assert block_construction(4, 2).weights == (1, 1, 3, 3)
    assert block_construction(6, 2).weights == (1, 1, 3, 3, 9, 9)
    assert block_construction(3, 3).weights == (1, 1, 1)
    assert block_construction(6, 3).weights == (1, 1, 1, 4, 4, 4)
    with pytest.raises(BadParams):
        block_construction(5, 2)
    with pytest.raises(BadParams):
        block_construction(0, 1)


@pytest.mark.parametrize(
    "n,k", [(4, 2), (6, 2), (8, 2), (6, 3), (9, 3), (8, 4), (3, 3)]
)
def test_block_theory_matches_measurement(n, k):
    params = block_construction(n, k)
    theory = block_theory(n, k)
    rep = concentration(profile(params.weights))
    assert rep.rho == theory.rho
    assert rep.range_size == theory.range_size


def test_theorem_check():
    rep = concentration(profile((0,) * 6))
    chk = theorem_check(rep, C=1.0)
    assert chk.epsilon == pytest.approx(1 / 36)  # clamped at 1/n^2
    assert chk.delta == 0.0 and chk.holds

    rep = concentration(profile(tuple(2**i for i in range(10))))
    assert theorem_check(rep, C=1.0).holds  # ln2 <= sqrt(ln2)
    assert not theorem_check(rep, C=0.5).holds  # ln2 > 0.5*sqrt(ln2)
    chk = theorem_check(rep, C=0.5)
    assert chk.bound == pytest.approx(0.5 * math.sqrt(math.log(2)))
