import random

import pytest
from hypothesis import given, settings, strategies as st

import bruteforce as bf
from quasipolish.s0 import (
    ap_distinguish,
    ap_family,
    ap_injection,
    ap_union_member,
    closure_of_finite,
    intersection,
    is_dense_in,
    not_locally_closed_certificate,
    open_complement,
    parse_closed,
    s0_baire_check,
    s0_closed_decompose,
)
from quasipolish.seqnat import is_prefix, seq_unrank

DEPTH = 128
VISIBLE = [seq_unrank(r) for r in range(DEPTH)]


def test_closure_membership():
    A = closure_of_finite([(1,), (0, 2)])
    assert (1, 5) in A and (0, 2, 0) in A
    assert (0,) not in A and () not in A


def test_intersection_membership():
    A = intersection([closure_of_finite([(0,)]), closure_of_finite([(0, 1), (2,)])])
    assert (0, 1, 3) in A
    assert (0, 0) not in A and (2,) not in A


def test_parse_and_print():
    A = parse_closed("cl{(0),(1,2)}")
    assert str(A) == "cl{(0),(1,2)}"
    B = parse_closed("meet[cl{(0)}; cl{()}]")
    assert str(B) == "meet[cl{(0)}; cl{()}]"
    assert str(parse_closed("cl{}")) == "cl{}"
    with pytest.raises(ValueError):
        parse_closed("cl(0)")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, DEPTH - 1).map(seq_unrank), min_size=1, max_size=4))
def test_decompose_matches_prefix_minimal(F):
    A = closure_of_finite(F)
    dec = s0_closed_decompose(A, DEPTH)
    members = [s for s in VISIBLE if s in A]
    assert set(dec.D) == bf.prefix_minimal(members)
    assert dec.passed


def test_decompose_meet():
    A = intersection([closure_of_finite([(0,)]), closure_of_finite([(0, 1), (0, 2)])])
    dec = s0_closed_decompose(A, DEPTH)
    assert set(dec.D) == {(0, 1), (0, 2)}
    assert dec.passed


def test_decompose_empty_is_refused():
    with pytest.raises(ValueError):
        s0_closed_decompose(closure_of_finite([]), DEPTH)


def _random_dense_opens(rng, A, k):
    """Opens S0 \\ Cl(G) where G is a set of proper extensions of members
    of A; such an open is dense in A exactly when it passes is_dense_in."""
    out = []
    members = A.members(DEPTH)
    while len(out) < k:
        G = [m + (rng.randint(0, 2),) for m in rng.sample(members, min(2, len(members)))]
        U = open_complement(G)
        if is_dense_in(U, A, DEPTH):
            out.append(U)
    return out


def test_s0_baire_randomized():
    rng = random.Random(128)
    for _ in range(50):
        F = [seq_unrank(rng.randrange(40)) for _ in range(rng.randint(1, 4))]
        A = closure_of_finite(F)
        opens = _random_dense_opens(rng, A, rng.randint(1, 3))
        assert s0_baire_check(A, opens, DEPTH)


def test_s0_baire_rejects_non_dense():
    A = closure_of_finite([(0,)])
    with pytest.raises(ValueError):
        s0_baire_check(A, [open_complement([(0,)])], DEPTH)


def test_not_locally_closed():
    U = open_complement([(1,)])
    A = closure_of_finite([()])
    a, b = not_locally_closed_certificate((0,), U, A, DEPTH)
    assert a != b and is_prefix((0,), a) and is_prefix((0,), b)
    assert a in U and b in U
    with pytest.raises(ValueError):
        not_locally_closed_certificate((1,), U, A, DEPTH)


def test_ap_family_shape():
    assert ap_family((3, 1), 1) == ((4,), (0, 2), (0, 0))


@given(st.lists(st.integers(0, 5), min_size=1, max_size=5), st.data())
def test_ap_union_member_matches_oracle(p, data):
    seq = data.draw(st.lists(st.integers(0, 6), max_size=6).map(tuple))
    assert ap_union_member(p, seq) == bf.up_union_member(p, seq)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=5), st.lists(st.integers(0, 5), min_size=1, max_size=5))
def test_ap_distinguish(p, q):
    if all(a == b for a, b in zip(p, q)):
        with pytest.raises(ValueError):
            ap_distinguish(p, q)
        return
    x = ap_distinguish(p, q)
    assert x in ap_injection(p) and x not in ap_injection(q)
    assert bf.up_union_member(p, x) and not bf.up_union_member(q, x)


def test_ap_distinguish_depth_limit():
    with pytest.raises(ValueError):
        ap_distinguish((0, 0, 0, 5), (0, 0, 0, 1), depth=4)
    with pytest.raises(ValueError):
        ap_injection(())
