from hypothesis import given, settings, strategies as st

import bruteforce as bf
from quasipolish.generators import s1, sd
from quasipolish.space import (
    FiniteSpace,
    PointSet,
    basic_masks,
    basic_open,
    basis_nbhd,
    make_finite_from_subbasis,
    nbhd_mask,
)


@st.composite
def finite_spaces(draw, max_points=6, max_subs=4):
    n = draw(st.integers(1, max_points))
    subs = draw(st.lists(st.sets(st.integers(0, n - 1)), max_size=max_subs))
    return n, [sorted(s) for s in subs]


def test_sierpinski_opens():
    X = make_finite_from_subbasis(2, [{1}])
    assert X.opens() == frozenset({0b00, 0b10, 0b11})


def test_one_point_space():
    X = make_finite_from_subbasis(1, [])
    assert X.opens() == frozenset({0, 1})


def test_meet_of_subbasics_is_open():
    X = make_finite_from_subbasis(3, [{0, 1}, {1, 2}])
    assert X.is_open(0b010)


@settings(max_examples=60, deadline=None)
@given(finite_spaces(max_points=8))
def test_opens_match_brute_force(case):
    n, subs = case
    X = FiniteSpace.from_subbasis(n, subs)
    expected = bf.opens_of_basis(n, bf.basis_from_subbasis(n, subs))
    got = {frozenset(p for p in range(n) if o >> p & 1) for o in X.opens()}
    assert got == expected


@settings(max_examples=60, deadline=None)
@given(finite_spaces())
def test_closure_interior_duality(case):
    n, subs = case
    X = FiniteSpace.from_subbasis(n, subs)
    for S in range(1 << n):
        assert X.closure_mask(S) == X.full & ~X.interior_mask(X.full & ~S)
        assert X.is_closed(X.closure_mask(S))


def test_basic_open_examples():
    assert basic_open(sd(), 2, 6) == PointSet(frozenset({2, 3, 4, 5}), 6)
    assert basic_open(s1(), 1, 5) == PointSet(frozenset({1, 2, 3, 4}), 5)  # F_1 = {0}
    assert basic_open(sd(), 0, 7).members == frozenset(range(7))


def test_basis_nbhd_examples():
    assert basis_nbhd(sd(), 3, 0, 10).members == frozenset(range(10))
    assert basis_nbhd(sd(), 3, 3, 10).members == frozenset(range(3, 10))
    # S1: every F_i with i <= 40 not containing 0 is excluded
    got = basis_nbhd(s1(), 0, 40, 64).members
    excluded = {p for i in range(41) if not i & 1 for p in range(64) if i >> p & 1}
    assert got == frozenset(range(64)) - excluded


@given(st.integers(0, 30), st.integers(0, 30))
def test_nbhd_shrinks_and_contains_point(x, n):
    for space in (sd(), s1()):
        d = 32
        assert nbhd_mask(space, x, n, d) >> x & 1
        if n + 1 < d:
            assert nbhd_mask(space, x, n + 1, d) & ~nbhd_mask(space, x, n, d) == 0


def test_truncation_consistency():
    for space in (sd(), s1()):
        small, big = basic_masks(space, 16), basic_masks(space, 40)
        assert all(a == b & 0xFFFF for a, b in zip(small, big))


def test_product_rectangles():
    X = make_finite_from_subbasis(2, [{1}])
    P = X.product(X)
    assert P.point_count == 4
    # (1, 1) is the point 1*2+1 and its least open is {1} x {1}
    assert P.min_open(3) == 1 << 3
