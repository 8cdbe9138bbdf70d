from hypothesis import given, strategies as st

from quasipolish.seqnat import (
    bits,
    cantor_pair,
    cantor_unpair,
    finite_set,
    finite_set_code,
    format_seq,
    is_prefix,
    parse_seq,
    seq_rank,
    seq_unrank,
)

seqs = st.lists(st.integers(0, 12), max_size=5).map(tuple)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_pairing_roundtrip(a, b):
    assert cantor_unpair(cantor_pair(a, b)) == (a, b)


@given(st.integers(0, 10**9))
def test_unpair_roundtrip(n):
    assert cantor_pair(*cantor_unpair(n)) == n


def test_pairing_first_values():
    assert [cantor_unpair(n) for n in range(6)] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


@given(seqs)
def test_rank_roundtrip(s):
    assert seq_unrank(seq_rank(s)) == s


def test_rank_is_a_bijection_on_an_initial_segment():
    ranks = {seq_rank(seq_unrank(r)) for r in range(500)}
    assert ranks == set(range(500))


@given(seqs, st.integers(0, 12))
def test_rank_grows_along_extensions(s, n):
    t = s + (n,)
    assert seq_rank(t) > seq_rank(s)
    assert seq_rank(t) >= n


def test_rank_base_cases():
    assert seq_rank(()) == 0
    assert seq_rank((0,)) == 1
    assert seq_unrank(2) == (0, 0)


@given(st.sets(st.integers(0, 40)))
def test_finite_set_code(s):
    assert finite_set(finite_set_code(s)) == frozenset(s)
    assert list(bits(finite_set_code(s))) == sorted(s)


@given(seqs, seqs)
def test_prefix(a, b):
    assert is_prefix(a, a + b)
    if is_prefix(a, b) and is_prefix(b, a):
        assert a == b


@given(seqs)
def test_format_parse(s):
    assert parse_seq(format_seq(s)) == s


def test_parse_seq_spacing_and_errors():
    assert parse_seq(" ( 1 , 2 ) ") == (1, 2)
    assert parse_seq("()") == ()
    for bad in ("(1,", "1,2", "(a)", "(1,,2)"):
        try:
            parse_seq(bad)
        except ValueError:
            continue
        raise AssertionError(bad)
