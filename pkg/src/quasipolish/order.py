"""Specialization order, closure/interior, separation axioms, perfectness,
maximal points, the density relation and sobriety evidence.

Answers computed from a truncation carry their one-sided error explicitly:
a depth-bounded ``leq`` that says *unrelated* is final, one that says
*related* may be overturned by a deeper truncation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .seqnat import bits
from .space import (
    FiniteSpace,
    PointSet,
    Space,
    basic_masks,
    exhaustive,
    full_mask,
    lowest,
    mask_of,
    n_basics,
    n_points,
    popcount,
    presented,
)


@dataclass(frozen=True)
class SpecializationAnswer:
    related: bool
    exact: bool
    depth: Optional[int] = None

    @property
    def certainty(self) -> str:
        return "exact" if self.exact else f"depth_bounded({self.depth})"


@dataclass(frozen=True)
class Verdict:
    status: str  # holds_exactly | holds_at_depth | fails | inconclusive
    witness: tuple = ()

    @property
    def holds(self) -> bool:
        return self.status in ("holds_exactly", "holds_at_depth")

    def __str__(self) -> str:
        if self.witness:
            return f"{self.status}{self.witness}"
        return self.status


def resolve_depth(space: Space, depth: Optional[int]) -> int:
    if depth is not None:
        return depth
    s = presented(space)
    if s.point_count is None or s.basic_count is None:
        raise ValueError("an infinite space needs an explicit depth")
    return max(s.point_count, s.basic_count, 1)


def _exact_order(space: Space, depth: int) -> bool:
    return presented(space).leq_oracle is not None or exhaustive(space, depth)


def order_rows(space: Space, depth: int) -> tuple:
    """(up, down): up[x] is the bitset of visible y with x <= y and
    down[x] the bitset of visible y with y <= x."""
    s = presented(space)
    key = ("order", depth)
    if key not in s._cache:
        n = n_points(s, depth)
        if s.leq_oracle is not None:
            up = [mask_of(y for y in range(n) if s.leq_oracle(x, y)) for x in range(n)]
        else:
            full = full_mask(s, depth)
            masks = basic_masks(s, depth)
            up = []
            for x in range(n):
                m = full
                for b in masks:
                    if b >> x & 1:
                        m &= b
                up.append(m)
        down = [0] * n
        for x in range(n):
            for y in bits(up[x]):
                down[y] |= 1 << x
        s._cache[key] = (tuple(up), tuple(down))
    return s._cache[key]


def leq(space: Space, x: int, y: int, depth: Optional[int] = None) -> SpecializationAnswer:
    s = presented(space)
    if depth is None and s.leq_oracle is not None:
        return SpecializationAnswer(bool(s.leq_oracle(x, y)), True)
    depth = resolve_depth(space, depth)
    if not (x < depth and y < depth):
        raise ValueError("points must lie inside the truncation")
    up, _ = order_rows(space, depth)
    return SpecializationAnswer(bool(up[x] >> y & 1), _exact_order(space, depth), depth)


def closure_mask(space: Space, mask: int, depth: int, within: Optional[int] = None) -> int:
    _, down = order_rows(space, depth)
    out = 0
    for x in bits(mask):
        out |= down[x]
    return out if within is None else out & within


def interior_mask(space: Space, mask: int, depth: int, within: Optional[int] = None) -> int:
    out = 0
    for b in basic_masks(space, depth):
        t = b if within is None else b & within
        if t & ~mask == 0:
            out |= t
    return out


def closure(space: Space, S: PointSet, depth: Optional[int] = None) -> PointSet:
    depth = resolve_depth(space, depth)
    return PointSet.from_bits(closure_mask(space, S.mask, depth), depth)


def interior(space: Space, S: PointSet, depth: Optional[int] = None) -> PointSet:
    depth = resolve_depth(space, depth)
    return PointSet.from_bits(interior_mask(space, S.mask, depth), depth)


# ------------------------------------------------------------ separation axioms

def _pairs(n):
    for x in range(n):
        for y in range(n):
            if x != y:
                yield x, y


def _t0_violation(space, depth):
    up, _ = order_rows(space, depth)
    for x, y in _pairs(n_points(space, depth)):
        if up[x] >> y & 1 and up[y] >> x & 1:
            return (x, y)
    return None


def _t1_violation(space, depth):
    up, _ = order_rows(space, depth)
    for x, y in _pairs(n_points(space, depth)):
        if up[x] >> y & 1:
            return (x, y)
    return None


def _t2_violation(space, depth):
    masks = basic_masks(space, depth)
    n = n_points(space, depth)
    for x in range(n):
        for y in range(x + 1, n):
            ux = [b for b in masks if b >> x & 1]
            uy = [b for b in masks if b >> y & 1]
            if not any(a & b == 0 for a in ux for b in uy):
                return (x, y)
    return None


def locally_closed_witness(space: Space, x: int, depth: int, within: Optional[int] = None):
    """Least visible basic U with U & Cl({x}) & A == {x}, or None."""
    A = full_mask(space, depth) if within is None else within
    cl = closure_mask(space, 1 << x, depth) & A
    for i, b in enumerate(basic_masks(space, depth)):
        if b & cl == 1 << x:
            return i
    return None


def _td_violation(space, depth):
    s = presented(space)
    for x in range(n_points(space, depth)):
        if s.lc_oracle is not None and not exhaustive(space, depth):
            if not s.lc_oracle(x, 0):
                return (x,)
        elif locally_closed_witness(space, x, depth) is None:
            return (x,)
    return None


def _axiom(space, depth, name, finder, exact_refutation: bool) -> Verdict:
    depth = resolve_depth(space, depth)
    s = presented(space)
    if exhaustive(space, depth):
        w = finder(space, depth)
        return Verdict("fails", w) if w else Verdict("holds_exactly")
    if name in s.facts:
        if s.facts[name]:
            return Verdict("holds_exactly")
        return Verdict("fails", finder(space, depth) or ())
    w = finder(space, depth)
    if w is None:
        return Verdict("holds_at_depth")
    return Verdict("fails" if exact_refutation else "inconclusive", w)


def is_T0(space: Space, depth: Optional[int] = None) -> Verdict:
    return _axiom(space, depth, "T0", _t0_violation, presented(space).leq_oracle is not None)


def is_T1(space: Space, depth: Optional[int] = None) -> Verdict:
    return _axiom(space, depth, "T1", _t1_violation, presented(space).leq_oracle is not None)


def is_T2(space: Space, depth: Optional[int] = None) -> Verdict:
    return _axiom(space, depth, "T2", _t2_violation, False)


def is_TD(space: Space, depth: Optional[int] = None) -> Verdict:
    # a T_D failure is only reported from an exact oracle or exhaustion
    return _axiom(space, depth, "TD", _td_violation, presented(space).lc_oracle is not None)


# ------------------------------------------------------------------ perfectness

def is_perfect(space: Space, depth: Optional[int] = None, within: Optional[int] = None) -> Verdict:
    """No singleton is open.  On the whole space a visible singleton basic
    refutes perfectness only when no hidden point can belong to it; on a
    proper subspace the visible traces decide."""
    depth = resolve_depth(space, depth)
    s = presented(space)
    full = full_mask(space, depth)
    masks = basic_masks(space, depth)
    if within is None or within == full:
        if "perfect" in s.facts and not exhaustive(space, depth):
            if s.facts["perfect"]:
                return Verdict("holds_exactly")
        closed_world = s.point_count is not None and s.point_count <= depth
        for i, b in enumerate(masks):
            if b and b & (b - 1) == 0:
                if closed_world or (s.basic_infinite is not None and s.basic_infinite(i) is False
                                    and s.point_count is not None):
                    return Verdict("fails", (lowest(b), i))
        return Verdict("holds_exactly" if closed_world else "holds_at_depth")
    if within == 0:
        return Verdict("holds_exactly")
    for i, b in enumerate(masks):
        t = b & within
        if t and t & (t - 1) == 0:
            return Verdict("fails", (lowest(t), i))
    return Verdict("holds_at_depth")


def max_points_mask(space: Space, depth: int, within: Optional[int] = None) -> int:
    A = full_mask(space, depth) if within is None else within
    up, _ = order_rows(space, depth)
    return mask_of(x for x in bits(A) if up[x] & A == 1 << x)


def max_points(space: Space, depth: Optional[int] = None) -> PointSet:
    depth = resolve_depth(space, depth)
    return PointSet.from_bits(max_points_mask(space, depth), depth)


# ------------------------------------------------------------- density relation

def _traces(space, depth, within):
    masks = basic_masks(space, depth)
    return masks if within is None else tuple(b & within for b in masks)


def triangle_rel(space: Space, x: int, U: int, depth: Optional[int] = None,
                 within: Optional[int] = None) -> bool:
    """x ◁ B_U at depth: every visible basic V containing x meets every
    non-empty visible basic W inside B_U.  May flip to False at larger depth."""
    depth = resolve_depth(space, depth)
    tr = _traces(space, depth, within)
    u = tr[U]
    if not u >> x & 1:
        raise ValueError(f"point {x} is not in basic open {U}")
    ws = {w for w in tr if w and w & ~u == 0}
    return all(all(v & w for w in ws) for v in tr if v >> x & 1)


def triangle_mask(space: Space, U: int, depth: int, within: Optional[int] = None) -> int:
    """Bitset of the points x with x ◁ B_U."""
    tr = _traces(space, depth, within)
    u = tr[U]
    if not u:
        return 0
    ws = {w for w in tr if w and w & ~u == 0}
    bad = 0
    for v in set(tr):
        if v & u and not all(v & w for w in ws):
            bad |= v
    return u & ~bad


def triangle_masks(space: Space, depth: int, within: Optional[int] = None) -> tuple:
    """triangle_mask for every visible basic U (cached)."""
    s = presented(space)
    key = ("triangle", depth, within)
    if key not in s._cache:
        n = len(basic_masks(space, depth))
        s._cache[key] = tuple(triangle_mask(space, U, depth, within) for U in range(n))
    return s._cache[key]


def d_set_mask(space: Space, depth: int, within: Optional[int] = None) -> int:
    out = 0
    for m in triangle_masks(space, depth, within):
        out |= m
    return out


def d_set(space: Space, depth: Optional[int] = None) -> PointSet:
    depth = resolve_depth(space, depth)
    return PointSet.from_bits(d_set_mask(space, depth), depth)


# --------------------------------------------------------------------- sobriety

def is_sober(space: FiniteSpace) -> bool:
    """Brute force: every irreducible closed set has a unique generic point."""
    closed = space.closed_sets()
    for c in closed:
        if not c:
            continue
        proper = [d for d in closed if d != c and d & ~c == 0]
        if any(a | b == c for a in proper for b in proper):
            continue
        generic = [x for x in bits(c) if space.closure_mask(1 << x) == c]
        if len(generic) != 1:
            return False
    return True


@dataclass(frozen=True)
class SoberEvidence:
    kind: str  # sober_no_evidence | nonsober_evidence
    closed: Optional[PointSet] = None
    generic: Optional[int] = None


def irreducible_at_depth(space: Space, depth: int, A: int) -> bool:
    traces = [t for t in _traces(space, depth, A) if t]
    return bool(A) and all(a & b for a in traces for b in traces)


def sober_evidence(space: Space, depth: Optional[int] = None, within: Optional[int] = None,
                   member: Optional[Callable[[int], bool]] = None) -> SoberEvidence:
    """Look for an irreducible closed truncated set without a generic point.

    ``within`` is the candidate closed set (default: the whole truncation) and
    ``member`` decides membership in it for points beyond the truncation.  A
    visible generic candidate is discarded when the exact order oracle shows a
    point of the set, at index below twice the depth, outside its closure;
    such refutations are final.
    """
    depth = resolve_depth(space, depth)
    s = presented(space)
    full = full_mask(space, depth)
    A = full if within is None else within
    if member is None:
        member = (lambda y: True) if within is None else (lambda y: False)
    if not irreducible_at_depth(space, depth, A):
        return SoberEvidence("sober_no_evidence")
    _, down = order_rows(space, depth)
    horizon = 2 * depth if s.point_count is None else min(2 * depth, s.point_count)
    for x in bits(A):
        if down[x] & A != A:
            continue
        refuted = False
        if s.leq_oracle is not None:
            for y in range(n_points(space, depth), horizon):
                if member(y) and not s.leq_oracle(y, x):
                    refuted = True
                    break
        if not refuted:
            return SoberEvidence("sober_no_evidence", generic=x)
    return SoberEvidence("nonsober_evidence", PointSet.from_bits(A, depth))
