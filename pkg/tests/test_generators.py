from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quasipolish.generators import (
    UnknownGenerator,
    ball,
    generator,
    omega_lt,
    part_of,
    plus_generic,
    rational,
    s0,
    s1,
    s2,
    sd,
    sierpinski,
    union_omega_lt,
)
from quasipolish.seqnat import is_prefix, seq_unrank


def test_rationals_start():
    assert [str(rational(p)) for p in range(9)] == ["0", "1", "-1", "1/2", "-1/2", "2", "-2", "1/3", "-1/3"]


def test_rationals_are_distinct():
    seen = [rational(p) for p in range(2000)]
    assert len(set(seen)) == len(seen)


@given(st.integers(1, 4000))
def test_ball_has_unit_fraction_radius(i):
    c, r = ball(i)
    assert isinstance(c, Fraction) and r.numerator == 1


def test_s2_membership_is_the_ball():
    S = s2()
    for i in range(1, 60):
        c, r = ball(i)
        for p in range(60):
            assert S.mem(p, i) == (abs(rational(p) - c) < r)
    assert all(S.mem(p, 0) for p in range(60))


def test_sd_and_s1_membership():
    assert [p for p in range(8) if sd().mem(p, 3)] == [3, 4, 5, 6, 7]
    # basic 5 of S1 omits {0, 2}
    assert [p for p in range(6) if s1().mem(p, 5)] == [1, 3, 4, 5]


def test_s0_membership_is_cone_complement():
    S = s0()
    for i in range(64):
        F = [seq_unrank(j) for j in range(8) if i >> j & 1]
        for p in range(40):
            assert S.mem(p, i) == (not any(is_prefix(f, seq_unrank(p)) for f in F))


def test_s0_order_is_reverse_prefix():
    S = s0()
    for x in range(30):
        for y in range(30):
            assert S.leq_oracle(x, y) == is_prefix(seq_unrank(y), seq_unrank(x))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bounded_tree_lengths(n):
    T = omega_lt(n)
    labels = [T.label(p) for p in range(50 if n > 1 else 1)]
    assert labels[0] == "()"
    assert len(set(labels)) == len(labels)
    assert all(lab.count(",") + (lab != "()") < n for lab in labels)


def test_omega_lt_3_enumeration():
    assert [omega_lt(3).label(p) for p in range(8)] == ["()", "(0)", "(0,0)", "(1)", "(0,1)", "(2)", "(1,0)", "(0,2)"]


def test_omega_lt_rejects_zero():
    with pytest.raises(UnknownGenerator):
        omega_lt(0)


def test_union_parts_cover_pairs():
    u = union_omega_lt()
    parts = [part_of(u, p) for p in range(6)]
    assert parts == [(0, 0), (1, 0), (2, 0), (1, 1), (3, 0), (2, 1)]


def test_plus_generic_point_is_everywhere():
    g = plus_generic(s1())
    assert all(g.mem(0, i) for i in range(64))
    assert all(g.leq_oracle(x, 0) for x in range(20))
    assert not any(g.leq_oracle(0, x) for x in range(1, 20))
    assert g.label(0) == "g"


def test_plus_generic_finite():
    g = plus_generic(sierpinski())
    assert g.point_count == 3


def test_generator_dispatch():
    assert generator("SD").tag == "SD"
    assert generator("S2").tag == "S2"
    with pytest.raises(UnknownGenerator):
        generator("S3")
