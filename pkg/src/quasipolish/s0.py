"""Closed sets of S0 and the structure results built on them.

Points are finite sequences; ``p <= q`` in the prefix order means q extends p.
A closed set of S0 is an up-set for the prefix order, and the closure of a
finite set F is the union of the cones of its members.  Opens are described by
the finite set F whose cone-union they avoid.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .seqnat import SeqNat, format_seq, is_prefix, parse_seq, seq_rank, seq_unrank, zeros


def _visible(depth: int):
    return (seq_unrank(r) for r in range(depth))


@dataclass(frozen=True)
class S0ClosedSet:
    """``closure`` of the finite set F, or the ``meet`` of such closures."""

    kind: str
    F: tuple = ()
    parts: tuple = ()

    def __contains__(self, seq) -> bool:
        if self.kind == "closure":
            return any(is_prefix(p, seq) for p in self.F)
        return all(seq in c for c in self.parts)

    def members(self, depth: int) -> list:
        return [s for s in _visible(depth) if s in self]

    def extension(self, depth: int) -> int:
        """Bitset over point ranks < depth."""
        return sum(1 << r for r in range(depth) if seq_unrank(r) in self)

    def __str__(self) -> str:
        if self.kind == "closure":
            return "cl{" + ",".join(format_seq(p) for p in self.F) + "}"
        return "meet[" + "; ".join(str(c) for c in self.parts) + "]"


def closure_of_finite(F: Iterable) -> S0ClosedSet:
    F = tuple(sorted(set(tuple(p) for p in F), key=seq_rank))
    return S0ClosedSet("closure", F=F)


def intersection(parts: Iterable[S0ClosedSet]) -> S0ClosedSet:
    parts = tuple(parts)
    if not parts:
        raise ValueError("an intersection needs at least one closed set")
    return S0ClosedSet("meet", parts=parts)


@dataclass(frozen=True)
class S0Open:
    """The open set S0 minus Cl(F)."""

    F: tuple

    def __contains__(self, seq) -> bool:
        return not any(is_prefix(p, seq) for p in self.F)


def open_complement(F: Iterable) -> S0Open:
    return S0Open(tuple(sorted(set(tuple(p) for p in F), key=seq_rank)))


_CL_RE = re.compile(r"^cl\{(.*)\}$")


def parse_closed(text: str) -> S0ClosedSet:
    """``cl{(0),(1,2)}`` or ``meet[cl{...}; cl{...}]``."""
    text = text.strip()
    if text.startswith("meet[") and text.endswith("]"):
        return intersection(parse_closed(part) for part in text[5:-1].split(";"))
    m = _CL_RE.match(text)
    if not m:
        raise ValueError(f"not a closed-set literal: {text!r}")
    body = m.group(1).strip()
    F = [parse_seq(s + ")") for s in re.split(r"\)\s*,\s*", body[:-1])] if body else []
    if body and not body.endswith(")"):
        raise ValueError(f"not a closed-set literal: {text!r}")
    return closure_of_finite(F)


# ------------------------------------------------------------- decomposition

@dataclass(frozen=True)
class Decomposition:
    D: tuple
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)


def prefix_minimal(seqs: Iterable) -> list:
    seqs = list(seqs)
    return [s for s in seqs if not any(t != s and is_prefix(t, s) for t in seqs)]


def s0_closed_decompose(A: S0ClosedSet, depth: int) -> Decomposition:
    """D = prefix-minimal visible members of A (the specialization-maximal
    points); checks that D is discrete and that A = Cl(D) on visible points.

    The open isolating d in D is S0 minus Cl(D minus {d}).
    """
    visible = A.members(depth)
    if not visible:
        raise ValueError(f"closed set {A} has no visible member at depth {depth}")
    D = prefix_minimal(visible)
    discrete = all(
        [e for e in D if e in open_complement(x for x in D if x != d)] == [d] for d in D
    )
    cl = closure_of_finite(D)
    checks = (
        ("discrete", discrete),
        ("A_equals_Cl_D", A.extension(depth) == cl.extension(depth)),
    )
    return Decomposition(tuple(D), checks)


def is_dense_in(U: S0Open, A: S0ClosedSet, depth: int) -> bool:
    """Every visible a in A has a visible prefix in U & A (Cl of U & A is its up-set)."""
    members = A.members(depth)
    good = [u for u in members if u in U]
    return all(any(is_prefix(u, a) for u in good) for a in members)


def s0_baire_check(A: S0ClosedSet, dense_opens: Iterable[S0Open], depth: int) -> bool:
    """Every listed dense open of A contains every point of D."""
    dec = s0_closed_decompose(A, depth)
    ok = True
    for U in dense_opens:
        if not is_dense_in(U, A, depth):
            raise ValueError(f"open avoiding {[format_seq(p) for p in U.F]} is not dense in {A}")
        ok &= all(d in U for d in dec.D)
    return ok


def not_locally_closed_certificate(x: SeqNat, U: S0Open, A: S0ClosedSet, depth: int) -> tuple:
    """Two visible immediate successors of x inside U & A."""
    x = tuple(x)
    if seq_rank(x) >= depth or x not in U or x not in A:
        raise ValueError(f"{format_seq(x)} is not a visible point of U & A")
    found = []
    n = 0
    while len(found) < 2:
        succ = x + (n,)
        if seq_rank(succ) >= depth:
            raise ValueError(f"depth {depth} too small to exhibit two successors of {format_seq(x)}")
        if succ in U and succ in A:
            found.append(succ)
        n += 1
    return tuple(found)


# ----------------------------------------------------------- injection p -> A_p

def ap_family(p: SeqNat, n: int) -> tuple:
    """F^p_n = {0^m + (p(m)+1) : m <= n} together with 0^(n+1)."""
    return tuple(zeros(m) + (p[m] + 1,) for m in range(n + 1)) + (zeros(n + 1),)


def ap_injection(p: SeqNat, depth: Optional[int] = None) -> S0ClosedSet:
    """The meet of Cl(F^p_n) over n < len(p)."""
    p = tuple(p)
    if not p:
        raise ValueError("p needs at least one entry")
    return intersection(closure_of_finite(ap_family(p, n)) for n in range(len(p)))


def ap_union_member(p: SeqNat, seq: SeqNat) -> bool:
    """Membership in the cone union over n < len(p) of 0^n + (p(n)+1)."""
    return any(is_prefix(zeros(n) + (p[n] + 1,), seq) for n in range(len(p)))


def ap_distinguish(p: SeqNat, q: SeqNat, depth: Optional[int] = None) -> SeqNat:
    """0^n + (p(n)+1) for the first n where p and q differ; it lies in A_p but
    not in A_q."""
    p, q = tuple(p), tuple(q)
    n = next((i for i in range(min(len(p), len(q))) if p[i] != q[i]), None)
    if n is None:
        raise ValueError(f"{format_seq(p)} and {format_seq(q)} agree on their overlap")
    point = zeros(n) + (p[n] + 1,)
    if depth is not None and seq_rank(point) >= depth:
        raise ValueError(f"depth {depth} does not reach {format_seq(point)}")
    if point not in ap_injection(p) or point in ap_injection(q):
        raise AssertionError(f"{format_seq(point)} does not separate A_p from A_q")
    return point
