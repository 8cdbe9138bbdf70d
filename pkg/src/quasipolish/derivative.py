"""The locally-closed-singleton derivative, its rank, the countable Delta-3
condition and the Pi-3 presentation of a countable subset.

X^0 = X, X^{a+1} = X^a minus the points whose singleton is locally closed in
X^a.  The rank is the least a with X^a = X^{a+1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .borel import Basic, BorelExpr, Complement, Meet, Sigma, Union, extension
from .order import Verdict, closure_mask, locally_closed_witness, order_rows, resolve_depth
from .seqnat import bits
from .space import (
    PointSet,
    Space,
    all_subsets,
    basic_masks,
    exhaustive,
    full_mask,
    mask_of,
    n_points,
    popcount,
    presented,
)


@dataclass(frozen=True)
class OrdinalValue:
    shape: str  # finite | omega_plus | did_not_stabilize
    n: int

    def __str__(self) -> str:
        return f"{self.shape}({self.n})"


def finite(n: int) -> OrdinalValue:
    return OrdinalValue("finite", n)


@dataclass
class DerivativeTrace:
    depth: int
    stages: list = field(default_factory=list)
    # point -> (stage, basic index or None when removed on the oracle's word)
    removal_witnesses: dict = field(default_factory=dict)
    exact: bool = False

    def stage_masks(self) -> list:
        return [s.mask for s in self.stages]


def _lc_basic(space, x, depth, A):
    return locally_closed_witness(space, x, depth, within=A)


def derive_once(space: Space, A, depth: Optional[int] = None, stage: Optional[int] = None):
    """One derivative step on the visible subspace ``A`` (PointSet or bitset).

    When ``stage`` is given, ``A`` is taken to be the stage-th derivative of the
    whole space and a generator's exact oracle decides; otherwise a point is
    removed when some visible basic U has U & Cl_A({x}) & A == {x}.
    Returns (remaining bitset, {point: basic index or None}).
    """
    depth = resolve_depth(space, depth)
    mask = A.mask if isinstance(A, PointSet) else A
    s = presented(space)
    use_oracle = stage is not None and s.lc_oracle is not None and not exhaustive(space, depth)
    removed = {}
    for x in bits(mask):
        if use_oracle:
            if s.lc_oracle(x, stage):
                removed[x] = None
        else:
            u = _lc_basic(space, x, depth, mask)
            if u is not None:
                removed[x] = u
    return mask & ~mask_of(removed), removed


def _removed_later(s, A, k, max_steps) -> bool:
    # a stage can lose only invisible points; the oracle still knows whether
    # some visible point goes at a later stage
    if s.lc_oracle is None or not A:
        return False
    return any(s.lc_oracle(x, j) for x in bits(A) for j in range(k + 1, max_steps + 1))


def _stage_trace(space, depth, max_steps, start=None, oracle=True):
    s = presented(space)
    full = full_mask(space, depth)
    A = full if start is None else start
    use_stage = oracle and start is None
    trace_exhaustive = exhaustive(space, depth)
    trace = DerivativeTrace(depth, [PointSet.from_bits(A, depth)],
                            exact=trace_exhaustive or (use_stage and s.lc_oracle is not None))
    for k in range(max_steps + 1):
        B, removed = derive_once(space, A, depth, stage=k if use_stage else None)
        for x, u in removed.items():
            trace.removal_witnesses[x] = (k, u)
        if B == A and not (use_stage and not trace_exhaustive and _removed_later(s, A, k, max_steps)):
            return finite(k), trace
        A = B
        trace.stages.append(PointSet.from_bits(A, depth))
    return OrdinalValue("did_not_stabilize", max_steps), trace


def rank(space: Space, depth: Optional[int] = None, max_steps: int = 64):
    """Rank of the derivative and its trace on the visible points.

    The infinite union of the bounded trees gets the closed-form value
    omega_plus(0) after its first parts are checked to have ranks 1, 2, ...
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    depth = resolve_depth(space, depth)
    s = presented(space)
    if s.tag == "union_omega_lt":
        get = s.params[2]
        for j in range(4):
            r, _ = rank(get(j), depth, max_steps)
            if r != finite(j + 1):
                raise RuntimeError(f"part {j} has rank {r}, expected finite({j + 1})")
        _, trace = _stage_trace(space, depth, max_steps)
        return OrdinalValue("omega_plus", 0), trace
    return _stage_trace(space, depth, max_steps)


# ---------------------------------------------------------- Delta-3 condition

_EXHAUSTIVE_LIMIT = 12


def _no_lc_point(space, depth, A) -> bool:
    return all(_lc_basic(space, x, depth, A) is None for x in bits(A))


def delta3_condition(space: Space, depth: Optional[int] = None, max_steps: int = 64) -> Verdict:
    """Every non-empty subspace has a point with locally closed singleton.

    Finite spaces: every subset is tried.  Presented spaces: the derivative
    trace; a stuck non-empty stage is a certified failure only under an exact
    oracle.
    """
    depth = resolve_depth(space, depth)
    n = n_points(space, depth)
    if exhaustive(space, depth) and n <= _EXHAUSTIVE_LIMIT:
        for sub in all_subsets(n):
            if sub and _no_lc_point(space, depth, mask_of(sub)):
                return Verdict("fails", (PointSet(frozenset(sub), depth),))
        return Verdict("holds_exactly")
    r, trace = _stage_trace(space, depth, max_steps)
    last = trace.stages[-1]
    if r.shape == "finite" and len(last) == 0:
        return Verdict("holds_exactly" if exhaustive(space, depth) else "holds_at_depth")
    if r.shape == "finite" and trace.exact:
        return Verdict("fails", (last,))
    return Verdict("inconclusive", (last,) if r.shape == "finite" else ())


# ------------------------------------------------------------ Pi-3 witness

@dataclass(frozen=True)
class Delta3Witness:
    expr: BorelExpr
    points: tuple
    alphas: tuple
    U: tuple
    unmet: int  # side conditions with no visible separating basic

    def __str__(self) -> str:
        return f"Pi3 witness over {len(self.points)} points, unmet side conditions {self.unmet}"


def delta3_witness(space: Space, X_points, depth: Optional[int] = None,
                   max_steps: int = 64) -> Delta3Witness:
    """Pi-3 expression W = meet_j W_j with W_j = union_i A_i & V^i_j whose visible
    extension is exactly ``X_points``.

    A_i = Cl({x_i}) & U_i with U_i isolating x_i in the derivative stage where it
    is removed; V^i_j is B(x_i, j) cut down, for every k <= j with x_i outside
    Cl({x_k}), by the least visible basic holding x_i but not x_k.  The last
    index j uses every visible basic.  The result is checked extensionally.
    """
    depth = resolve_depth(space, depth)
    Xm = X_points.mask if isinstance(X_points, PointSet) else mask_of(X_points)
    full = full_mask(space, depth)
    masks = basic_masks(space, depth)
    pts = list(bits(Xm))
    if not pts:
        expr = Complement(Sigma(3, [(Basic(0), Union([]))]))
        return Delta3Witness(expr, (), (), (), 0)

    s = presented(space)
    if Xm == full and s.lc_oracle is not None and not exhaustive(space, depth):
        r, trace = _stage_trace(space, depth, max_steps)
    else:
        r, trace = _stage_trace(space, depth, max_steps, start=Xm)
    if r.shape != "finite" or len(trace.stages[-1]) != 0:
        raise ValueError("derivative of the subset does not empty at this depth")
    stage_masks = trace.stage_masks()

    _, down = order_rows(space, depth)
    alphas, Us = [], []
    for x in pts:
        a = trace.removal_witnesses[x][0]
        cl = down[x] & stage_masks[a]
        u = next((i for i, b in enumerate(masks) if b & cl == 1 << x), None)
        if u is None:
            raise ValueError(f"no visible basic isolates point {x} in its stage")
        alphas.append(a)
        Us.append(u)

    avoid = [Union([Basic(i) for i, b in enumerate(masks) if b and not b >> x & 1]) for x in pts]
    J = len(pts)
    unmet = set()
    Wj = []
    for j in range(J + 1):
        pairs = []
        for i, x in enumerate(pts):
            horizon = len(masks) - 1 if j == J else j
            parts = [Basic(Us[i])]
            parts += [Basic(b) for b in range(min(horizon, len(masks) - 1) + 1) if masks[b] >> x & 1]
            for k, xk in enumerate(pts[: j + 1]):
                if k != i and not down[xk] >> x & 1:
                    sep = next((b for b, m in enumerate(masks) if m >> x & 1 and not m >> xk & 1), None)
                    if sep is None:
                        unmet.add((i, k))
                    else:
                        parts.append(Basic(sep))
            pairs.append((Meet(_dedupe(parts)), avoid[i]))
        Wj.append(Sigma(2, pairs))
    expr = Complement(Sigma(3, [(Basic(0), w) for w in Wj]))
    if extension(expr, space, depth) != Xm:
        raise ValueError("Pi-3 construction does not match the subset at this depth")
    return Delta3Witness(expr, tuple(pts), tuple(alphas), tuple(Us), len(unmet))


def _dedupe(parts):
    seen, out = set(), []
    for p in parts:
        if p.index not in seen:
            seen.add(p.index)
            out.append(p)
    return out
