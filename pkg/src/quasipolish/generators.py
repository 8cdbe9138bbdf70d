"""Built-in presented spaces: S2, S1, SD, S0, omega_lt(n), disjoint unions and
the one-point generic extension.

For the generators the enumerated opens are already closed under finite
intersection, so basic index i is the i-th generating open itself.  Basic
index 0 is always the whole space.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .seqnat import bits, cantor_unpair, format_seq, is_prefix, seq_rank, seq_unrank
from .space import FiniteSpace, PresentedSpace, Space, presented

GENERATOR_TAGS = ("S2", "S1", "SD", "S0", "omega_lt", "union", "plus_generic")


class UnknownGenerator(ValueError):
    pass


def sd() -> PresentedSpace:
    return PresentedSpace(
        tag="SD",
        mem=lambda p, i: p >= i,
        leq_oracle=lambda x, y: x <= y,
        lc_oracle=lambda x, stage: stage == 0,
        basic_infinite=lambda i: True,
        facts=dict(T0=True, T1=False, T2=False, TD=True, perfect=True, sober=False),
    )


def s1() -> PresentedSpace:
    # basic i is the complement of the finite set coded by i
    return PresentedSpace(
        tag="S1",
        mem=lambda p, i: not (i >> p & 1),
        leq_oracle=lambda x, y: x == y,
        lc_oracle=lambda x, stage: stage == 0,
        basic_infinite=lambda i: True,
        facts=dict(T0=True, T1=True, T2=False, TD=True, perfect=True, sober=False),
    )


def _s0_mem(p: int, i: int) -> bool:
    seq = seq_unrank(p)
    return not any(is_prefix(seq_unrank(j), seq) for j in bits(i))


def s0() -> PresentedSpace:
    """Finite sequences with the lower topology of the prefix order.

    Point p is the sequence of rank p; basic i is the complement of the
    up-closure of the sequences whose ranks are the 1-bits of i.
    """
    return PresentedSpace(
        tag="S0",
        mem=_s0_mem,
        leq_oracle=lambda x, y: is_prefix(seq_unrank(y), seq_unrank(x)),
        lc_oracle=lambda x, stage: False,
        basic_infinite=lambda i: not (i & 1),
        facts=dict(T0=True, T1=False, T2=False, TD=False, perfect=True, sober=True),
        label=lambda p: format_seq(seq_unrank(p)),
    )


class _BoundedTree:
    """Sequences of length < n listed in increasing rank order."""

    def __init__(self, n: int):
        self.n = n
        self.points: list = []
        self.index: dict = {}
        self._heap = [(0, ())]

    def _grow(self, upto: int) -> None:
        while len(self.points) <= upto and self._heap:
            _, seq = heapq.heappop(self._heap)
            self.index[seq] = len(self.points)
            self.points.append(seq)
            if len(seq) + 1 < self.n:
                child = seq + (0,)
                heapq.heappush(self._heap, (seq_rank(child), child))
            if seq:
                sib = seq[:-1] + (seq[-1] + 1,)
                heapq.heappush(self._heap, (seq_rank(sib), sib))

    def __getitem__(self, p: int):
        self._grow(p)
        if p >= len(self.points):
            raise IndexError(p)
        return self.points[p]


def omega_lt(n: int) -> PresentedSpace:
    """Sequences of length < n, topology generated by complements of up-closures."""
    if n < 1:
        raise UnknownGenerator("omega_lt needs n >= 1")
    tree = _BoundedTree(n)
    pt = tree.__getitem__

    def mem(p, i):
        seq = pt(p)
        return not any(is_prefix(pt(j), seq) for j in bits(i))

    return PresentedSpace(
        tag="omega_lt",
        mem=mem,
        point_count=1 if n == 1 else None,
        basic_count=2 if n == 1 else None,
        leq_oracle=lambda x, y: is_prefix(pt(y), pt(x)),
        lc_oracle=lambda x, stage: len(pt(x)) == n - stage - 1,
        basic_infinite=lambda i: n >= 2 and not (i & 1),
        facts=dict(T0=True, T1=n == 1, T2=n == 1, TD=n == 1, perfect=n >= 2, sober=True),
        label=lambda p: format_seq(pt(p)),
        params=(n, tree),
    )


@lru_cache(maxsize=None)
def _fusc(k: int) -> int:
    if k < 2:
        return k
    if k % 2 == 0:
        return _fusc(k // 2)
    return _fusc(k // 2) + _fusc(k // 2 + 1)


def rational(p: int) -> Fraction:
    """p-th rational: 0, then +q_k, -q_k for the Calkin-Wilf sequence q_1, q_2, ..."""
    if p == 0:
        return Fraction(0)
    k = (p + 1) // 2
    q = Fraction(_fusc(k), _fusc(k + 1))
    return q if p % 2 == 1 else -q


def ball(i: int) -> tuple:
    """Centre and radius of basic open i >= 1 of S2."""
    a, b = cantor_unpair(i - 1)
    return rational(a), Fraction(1, b + 1)


def s2() -> PresentedSpace:
    def mem(p, i):
        if i == 0:
            return True
        c, r = ball(i)
        return abs(rational(p) - c) < r

    return PresentedSpace(
        tag="S2",
        mem=mem,
        leq_oracle=lambda x, y: x == y,
        lc_oracle=lambda x, stage: stage == 0,
        basic_infinite=lambda i: True,
        facts=dict(T0=True, T1=True, T2=True, TD=True, perfect=True, sober=True),
        label=lambda p: str(rational(p)),
    )


class _PairEnum:
    """Enumerate the pairs (j, k) accepted by ``valid`` in Cantor order."""

    def __init__(self, valid: Callable[[int, int], bool], total: Optional[int]):
        self.valid = valid
        self.total = total
        self.items: list = []
        self.index: dict = {}
        self._next = 0

    def __getitem__(self, p: int):
        if self.total is not None and p >= self.total:
            raise IndexError(p)
        while len(self.items) <= p:
            pair = cantor_unpair(self._next)
            self._next += 1
            if self.valid(*pair):
                self.index[pair] = len(self.items)
                self.items.append(pair)
        return self.items[p]


def disjoint_union(parts: Optional[list] = None, part_fn=None, tag: str = "union") -> PresentedSpace:
    """Disjoint union of finitely many spaces, or of ``part_fn(j)`` for all j.

    Points and non-trivial basic opens of the parts are interleaved by
    enumerating (part, local index) pairs in Cantor order.
    """
    if parts is not None:
        parts = [presented(p) for p in parts]
        count = len(parts)
        get = parts.__getitem__
    else:
        count = None
        get = lru_cache(maxsize=None)(lambda j: presented(part_fn(j)))

    def in_range(j, k, attr):
        if count is not None and j >= count:
            return False
        bound = getattr(get(j), attr)
        return bound is None or k < bound

    finite = count is not None and all(p.point_count is not None for p in parts)
    pts = _PairEnum(lambda j, k: in_range(j, k, "point_count"),
                    sum(p.point_count for p in parts) if finite else None)
    finite_b = count is not None and all(p.basic_count is not None for p in parts)
    bas = _PairEnum(lambda j, k: in_range(j, k, "basic_count"),
                    sum(p.basic_count for p in parts) if finite_b else None)

    def mem(p, b):
        if b == 0:
            return True
        j, i = bas[b - 1]
        jp, lp = pts[p]
        return jp == j and get(j).mem(lp, i)

    def leq(x, y):
        jx, lx = pts[x]
        jy, ly = pts[y]
        return jx == jy and get(jx).leq_oracle(lx, ly)

    def lc(x, stage):
        j, lx = pts[x]
        return get(j).lc_oracle(lx, stage)

    def binf(b):
        if b == 0:
            return count is None or any(p.basic_infinite and p.point_count is None for p in parts)
        j, i = bas[b - 1]
        f = get(j).basic_infinite
        return bool(f and f(i))

    sample = parts if parts is not None else [get(0), get(1)]
    facts = {
        k: all(p.facts.get(k, False) for p in sample)
        for k in ("T0", "T1", "T2", "TD", "perfect", "sober")
        if all(k in p.facts for p in sample)
    }
    if parts is None:
        facts = {}
    return PresentedSpace(
        tag=tag,
        mem=mem,
        point_count=pts.total,
        basic_count=None if bas.total is None else bas.total + 1,
        leq_oracle=leq if all(p.leq_oracle for p in sample) else None,
        lc_oracle=lc if all(p.lc_oracle for p in sample) else None,
        basic_infinite=binf,
        facts=facts,
        label=lambda p: f"{pts[p][0]}:{get(pts[p][0]).label(pts[p][1])}",
        parts=tuple(parts) if parts is not None else (),
        params=(pts, bas, get, count),
    )


def union_omega_lt() -> PresentedSpace:
    """Disjoint union of omega_lt(n) over all n >= 1."""
    return disjoint_union(part_fn=lambda j: omega_lt(j + 1), tag="union_omega_lt")


def part_of(space: PresentedSpace, p: int) -> tuple:
    """(part index, local point) for a point of a disjoint union."""
    return space.params[0][p]


def _basic_nonempty(s: PresentedSpace, i: int) -> bool:
    if s.point_count is not None:
        return any(s.mem(p, i) for p in range(s.point_count))
    if s.basic_infinite and s.basic_infinite(i):
        return True
    return any(s.mem(p, i) for p in range(4096))


def _is_top(s: PresentedSpace, y: int) -> bool:
    # y lies in every non-empty open iff every point is below y; a refutation
    # by the exact order oracle is final
    if s.point_count is not None:
        return all(s.leq_oracle(z, y) for z in range(s.point_count))
    return all(s.leq_oracle(z, y) for z in range(max(64, 2 * y + 2)))


def plus_generic(inner: Space) -> PresentedSpace:
    """Adjoin a point g (index 0) lying in every non-empty basic open of ``inner``."""
    inner = presented(inner)
    nonempty = lru_cache(maxsize=None)(lambda i: _basic_nonempty(inner, i))

    def mem(p, i):
        return nonempty(i) if p == 0 else inner.mem(p - 1, i)

    leq = None
    if inner.leq_oracle:
        def leq(x, y):
            if y == 0:
                return True
            if x == 0:
                return _is_top(inner, y - 1)
            return inner.leq_oracle(x - 1, y - 1)

    lc = None
    if inner.facts.get("TD") and inner.lc_oracle:
        # inner points are locally closed at stage 0; g survives to stage 1
        def lc(x, stage):
            return stage == 1 if x == 0 else stage == 0

    return PresentedSpace(
        tag="plus_generic",
        mem=mem,
        point_count=None if inner.point_count is None else inner.point_count + 1,
        basic_count=inner.basic_count,
        leq_oracle=leq,
        lc_oracle=lc,
        basic_infinite=inner.basic_infinite,
        facts=dict(T0=inner.facts.get("T0", False)) if "T0" in inner.facts else {},
        label=lambda p: "g" if p == 0 else inner.label(p - 1),
        inner=inner,
    )


def generator(tag: str, *params) -> PresentedSpace:
    if tag == "S2":
        return s2()
    if tag == "S1":
        return s1()
    if tag == "SD":
        return sd()
    if tag == "S0":
        return s0()
    if tag == "omega_lt":
        (n,) = params
        if n < 1:
            raise UnknownGenerator("omega_lt needs n >= 1")
        return omega_lt(n)
    if tag == "union":
        if params == ("omega_lt", "*"):
            return union_omega_lt()
        return disjoint_union(list(params))
    if tag == "plus_generic":
        (inner,) = params
        return plus_generic(inner)
    raise UnknownGenerator(f"unknown generator {tag!r}")


def sierpinski() -> FiniteSpace:
    return FiniteSpace.from_subbasis(2, [{1}], tag="sierpinski")
