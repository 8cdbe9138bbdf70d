import pytest
from hypothesis import given, settings, strategies as st

import bruteforce as bf
from quasipolish import borel
from quasipolish.derivative import OrdinalValue, delta3_condition, delta3_witness, derive_once, finite, rank
from quasipolish.generators import omega_lt, s0, s1, s2, sd, sierpinski, union_omega_lt
from quasipolish.space import FiniteSpace, PointSet


@st.composite
def finite_spaces(draw):
    n = draw(st.integers(1, 5))
    subs = draw(st.lists(st.sets(st.integers(0, n - 1)).map(sorted), max_size=3))
    return n, subs


@settings(max_examples=80, deadline=None)
@given(finite_spaces())
def test_rank_and_delta3_match_brute_force(case):
    n, subs = case
    X = FiniteSpace.from_subbasis(n, subs)
    opens = bf.opens_of_basis(n, bf.basis_from_subbasis(n, subs))
    assert rank(X)[0] == finite(bf.derivative_rank(n, opens))
    assert (delta3_condition(X).status == "holds_exactly") == bf.delta3_condition(n, opens)


def test_generator_ranks():
    assert rank(sd(), 32)[0] == finite(1)
    assert rank(s1(), 32)[0] == finite(1)
    assert rank(s2(), 32)[0] == finite(1)
    assert rank(s0(), 32)[0] == finite(0)
    assert rank(sierpinski())[0] == finite(1)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bounded_tree_ranks(n):
    value, trace = rank(omega_lt(n), 128)
    assert value == finite(n)
    assert len(trace.stages[-1]) == 0


def test_bounded_tree_stages_are_by_length():
    T = omega_lt(3)
    _, trace = rank(T, 64)
    assert trace.stages[2].members == frozenset({0})
    assert all(T.label(p).count(",") == 0 and T.label(p) != "()" for p in trace.stages[1].members - {0})


def test_union_has_rank_omega():
    assert rank(union_omega_lt(), 128)[0] == OrdinalValue("omega_plus", 0)


def test_rank_rejects_zero_steps():
    with pytest.raises(ValueError):
        rank(sd(), 16, max_steps=0)


def test_derive_once_on_sd_removes_everything():
    A = PointSet(frozenset(range(16)), 16)
    remaining, witnesses = derive_once(sd(), A, 16)
    assert remaining == 0
    assert witnesses == {x: x for x in range(16)}  # B_x isolates x in SD


def test_delta3_condition_examples():
    assert delta3_condition(sd(), 64).status == "holds_at_depth"
    assert delta3_condition(s0(), 32).status == "fails"
    assert delta3_condition(omega_lt(3), 64).status == "holds_at_depth"


def test_delta3_witness_on_bounded_tree():
    X = PointSet(frozenset(range(16)), 16)
    w = delta3_witness(omega_lt(2), X, 16)
    assert w.alphas[:5] == (1, 0, 0, 0, 0)
    assert borel.extension(w.expr, omega_lt(2), 16) == (1 << 16) - 1
    assert w.expr.level == ("Pi", 3)


def test_delta3_witness_subset():
    pts = PointSet(frozenset({2, 5, 7}), 16)
    w = delta3_witness(sd(), pts, 16)
    assert borel.extension(w.expr, sd(), 16) == (1 << 2) | (1 << 5) | (1 << 7)


def test_delta3_witness_empty():
    w = delta3_witness(sd(), PointSet(frozenset(), 16), 16)
    assert borel.extension(w.expr, sd(), 16) == 0


def test_delta3_witness_refuses_s0():
    with pytest.raises(ValueError):
        delta3_witness(s0(), PointSet(frozenset(range(16)), 16), 16)


@pytest.mark.parametrize("depth", [16, 32, 128])
def test_invisible_stage_does_not_stop_the_trace(depth):
    # at small depths no sequence of length 5 is visible, so stage 0 removes
    # nothing visible; the trace must still go on
    assert rank(omega_lt(6), depth)[0] == finite(6)
    assert delta3_condition(omega_lt(6), depth).status == "holds_at_depth"
