"""Constructive extraction of the canonical countable spaces from a truncation.

Every procedure resolves the existential choices of the underlying proofs to
least-index searches over visible points and basic opens, and returns an
:class:`ExtractionReport` whose checks all passed.  A construction that runs
out of room in the truncation raises :class:`InconclusiveError`; a report whose
checks fail is never returned (:class:`CheckFailed` is raised instead).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .derivative import delta3_condition
from .order import (
    d_set_mask,
    irreducible_at_depth,
    is_perfect,
    is_T1,
    is_TD,
    max_points_mask,
    order_rows,
    resolve_depth,
    sober_evidence,
    triangle_masks,
)
from .seqnat import bits, cantor_unpair, format_seq, is_prefix, seq_unrank
from .space import (
    PointSet,
    Space,
    basic_masks,
    exhaustive,
    full_mask,
    lowest,
    mask_of,
    n_points,
    nbhd_mask,
    popcount,
    presented,
)


class InconclusiveError(RuntimeError):
    """The truncation is too small for the construction to finish."""


class CheckFailed(InconclusiveError):
    """A certifying check failed at the stated depth; ``report`` holds all checks."""

    def __init__(self, msg: str, report=None):
        super().__init__(msg)
        self.report = report


class PreconditionError(ValueError):
    """The input does not satisfy the hypotheses of the construction."""


@dataclass(frozen=True)
class ExtractionReport:
    tag: str
    points: object
    checks: tuple
    depth: int
    steps_used: int = 0
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def check(self, name: str) -> bool:
        return dict(self.checks)[name]


def _report(tag, points, checks, depth, steps=0, notes=()) -> ExtractionReport:
    checks = tuple((name, bool(ok)) for name, ok in checks)
    failed = [name for name, ok in checks if not ok]
    report = ExtractionReport(tag, points, checks, depth, steps, tuple(notes))
    if failed:
        raise CheckFailed(f"{tag}: checks failed at depth {depth}: {', '.join(failed)}", report)
    return report


@dataclass
class _Ctx:
    space: object
    depth: int
    full: int
    masks: tuple
    up: tuple
    down: tuple

    @classmethod
    def of(cls, space, depth):
        up, down = order_rows(space, depth)
        return cls(space, depth, full_mask(space, depth), basic_masks(space, depth), up, down)

    def nbhd(self, x, n):
        return nbhd_mask(self.space, x, n, self.depth)

    def leq(self, x, y) -> bool:
        return bool(self.up[x] >> y & 1)


def _require(ok: bool, msg: str):
    if not ok:
        raise PreconditionError(msg)


def _perfect_td(space, depth, within=None):
    if within is None:
        p, t = is_perfect(space, depth), is_TD(space, depth)
        _require(p.holds, f"space is not perfect at depth {depth}: {p}")
        _require(t.holds, f"space is not T_D at depth {depth}: {t}")


# ----------------------------------------------------------------- chain or Max

def _refuted_max(ctx: _Ctx, Max: int, within, lookahead) -> int:
    """Visible maximal points shown non-maximal by a point beyond the window."""
    s = presented(ctx.space)
    out = 0
    if lookahead:
        for x in bits(Max):
            if any(ctx.leq(x, y) and not ctx.leq(y, x) for y in bits(lookahead)):
                out |= 1 << x
    elif within is None and s.leq_oracle is not None and s.point_count is None:
        horizon = 2 * ctx.depth
        for x in bits(Max):
            if any(s.leq_oracle(x, y) and not s.leq_oracle(y, x) for y in range(ctx.depth, horizon)):
                out |= 1 << x
    return out


def _upset_traces(ctx: _Ctx, chain: list) -> bool:
    # each visible basic meets the chain in a final segment
    for b in ctx.masks:
        inside = [bool(b >> x & 1) for x in chain]
        if any(inside[i] and not inside[i + 1] for i in range(len(inside) - 1)):
            return False
    return True


def _strict_chain(ctx: _Ctx, chain: list) -> bool:
    return all(ctx.leq(a, b) and not ctx.leq(b, a)
               for i, a in enumerate(chain) for b in chain[i + 1:])


def chain_or_max(space: Space, depth: int, target_len: int = 8, within: Optional[int] = None,
                 lookahead: int = 0) -> ExtractionReport:
    """Either an increasing specialization chain (tag SD) starting at a point
    below no maximal point, or the maximal points as a perfect T1 subspace.

    A visible maximal point counts only if no point of ``lookahead`` (or, on a
    whole generator, no point up to twice the depth) lies strictly above it.
    """
    ctx = _Ctx.of(space, depth)
    A = ctx.full if within is None else within
    _require(A != 0, "empty space")
    _perfect_td(space, depth, within)
    Max = max_points_mask(space, depth, A)
    Max &= ~_refuted_max(ctx, Max, within, lookahead)
    x0 = next((x for x in bits(A) if ctx.up[x] & Max == 0), None)
    if x0 is not None:
        chain = [x0]
        while len(chain) < target_len:
            cur = chain[-1]
            nxt = next((y for y in bits(A & ctx.up[cur]) if y not in chain and not ctx.leq(y, cur)), None)
            if nxt is None:
                raise InconclusiveError(f"chain stops after {len(chain)} points at depth {depth}")
            chain.append(nxt)
        checks = [
            ("below_no_max", ctx.up[x0] & Max == 0),
            ("strict_chain", _strict_chain(ctx, chain)),
            ("upset_traces", _upset_traces(ctx, chain)),
        ]
        return _report("SD", tuple(chain), checks, depth)
    M = Max
    if within is None and M == ctx.full:
        perfect = is_perfect(space, depth).holds
    else:
        perfect = is_perfect(space, depth, within=M).holds
    checks = [
        ("max_nonempty", M != 0),
        ("all_below_max", all(ctx.up[x] & M for x in bits(A))),
        ("max_T1", all(not ctx.leq(x, y) for x in bits(M) for y in bits(M) if x != y)),
        ("max_perfect", perfect),
    ]
    return _report("maxT1_subspace", tuple(bits(M)), checks, depth)


# ---------------------------------------------------------------------- S1

def _cofinite_trace(ctx: _Ctx, xs: list) -> bool:
    """For each emitted x_i and visible basic b containing it, every x_m with
    m > max(i, b) lies in b."""
    for i, x in enumerate(xs):
        for b, m in enumerate(ctx.masks):
            if m >> x & 1:
                for j in range(max(i, b) + 1, len(xs)):
                    if not m >> xs[j] & 1:
                        return False
    return True


def _t1_trace(ctx: _Ctx, xs: list) -> bool:
    # specialization is discrete on the emitted points
    return all(not ctx.leq(a, b) for a in xs for b in xs if a != b)


def extract_S1(space: Space, depth: int, count: int = 16, within: Optional[int] = None) -> ExtractionReport:
    """Points x_0, x_1, ... with x_{n+1} chosen in V^n = meet_i U_i & B(x_i, n)."""
    ctx = _Ctx.of(space, depth)
    A = ctx.full if within is None else within
    if within is None:
        t1 = is_T1(space, depth)
        _require(t1.holds, f"space is not T1 at depth {depth}: {t1}")
        _require(is_perfect(space, depth).holds, "space is not perfect")
    tr = [m & A for m in ctx.masks]
    tri = triangle_masks(space, depth, within)
    D = d_set_mask(space, depth, within)
    interior = 0
    for t in tr:
        if t and t & ~D == 0:
            interior |= t
    _require(interior != 0, f"D(X) has empty interior at depth {depth}")

    def pick_U(x, inside):
        return next((u for u, t in enumerate(tr)
                     if t >> x & 1 and t & ~inside == 0 and tri[u] >> x & 1), None)

    x0 = lowest(interior)
    u0 = pick_U(x0, D)
    xs, Us = [x0], [u0]
    steps = 0
    while len(xs) < count:
        n = len(xs) - 1
        steps += 1
        if n == 0:
            V = tr[u0]
        else:
            V = A
            for i in range(n + 1):
                V &= tr[Us[i]] & ctx.nbhd(xs[i], n)
        cand = V & ~mask_of(xs)
        if not cand:
            raise InconclusiveError(f"V^{n} has no new visible point at depth {depth}")
        x = lowest(cand)
        u = pick_U(x, tr[Us[-1]])
        if u is None:
            raise InconclusiveError(f"no visible basic U with {x} ◁ U inside U_{n}")
        xs.append(x)
        Us.append(u)
    checks = [
        ("distinct", len(set(xs)) == len(xs)),
        ("T1_trace", _t1_trace(ctx, xs)),
        ("triangle", all(tri[u] >> x & 1 for x, u in zip(xs, Us))),
        ("nested_U", all(tr[Us[i + 1]] & ~tr[Us[i]] == 0 for i in range(len(Us) - 1))),
        ("cofinite_trace", _cofinite_trace(ctx, xs)),
    ]
    return _report("S1", tuple(xs), checks, depth, steps, notes=(("U", tuple(Us)),))


# ---------------------------------------------------------------------- S2

def _binary(sigma: tuple) -> str:
    return "".join(str(b) for b in sigma) or "e"


def extract_S2(space: Space, depth: int, tree_height: int = 4, within: Optional[int] = None,
               step_budget: int = 200_000, min_height: Optional[int] = None) -> ExtractionReport:
    """Binary tree of points x_s and opens U_s with disjoint sibling opens.

    With ``min_height`` set, heights tree_height, tree_height - 1, ...,
    min_height are tried in turn and the first complete tree is reported.
    """
    if min_height is not None and min_height < tree_height:
        last = None
        for h in range(tree_height, min_height - 1, -1):
            try:
                return extract_S2(space, depth, h, within, step_budget)
            except InconclusiveError as exc:
                if isinstance(exc, CheckFailed):
                    raise
                last = exc
        raise last
    ctx = _Ctx.of(space, depth)
    A = ctx.full if within is None else within
    if within is None:
        t1 = is_T1(space, depth)
        _require(t1.holds, f"space is not T1 at depth {depth}: {t1}")
        _require(is_perfect(space, depth).holds, "space is not perfect")
    tr = [m & A for m in ctx.masks]
    distinct = sorted({t for t in tr if t})
    _require(any(a & b == 0 for i, a in enumerate(distinct) for b in distinct[i + 1:]),
             f"no two disjoint non-empty visible opens at depth {depth}")
    budget = [step_budget]
    failed: set = set()

    def build(level, x, U):
        # subtree of height tree_height - level rooted at (x, U), or None;
        # it depends only on (level, x, U) so failures are memoized
        if level == tree_height:
            return {(): (x, U)}
        if (level, x, U) in failed:
            return None
        N = ctx.nbhd(x, level) & U & A
        subs, seen = [], set()
        for t in tr:
            if t and t & ~N == 0 and t not in seen:
                seen.add(t)
                subs.append(t)
        for tu in subs:
            if not tu >> x & 1:
                continue
            for tv in subs:
                budget[0] -= 1
                if budget[0] < 0:
                    raise InconclusiveError(f"step budget exhausted at depth {depth}")
                if tu & tv:
                    continue
                left = build(level + 1, x, tu)
                if left is None:
                    break
                right = next((r for y in bits(tv)
                              if (r := build(level + 1, y, tv)) is not None), None)
                if right is None:
                    continue
                out = {(): (x, U)}
                out.update({(0,) + k: v for k, v in left.items()})
                out.update({(1,) + k: v for k, v in right.items()})
                return out
        failed.add((level, x, U))
        return None

    nodes = build(0, lowest(A), A)
    if nodes is None:
        raise InconclusiveError(f"no disjoint pair of visible basics below some node at depth {depth}")
    S = mask_of(x for x, _ in nodes.values())
    internal = [s for s in nodes if len(s) < tree_height]
    checks = [
        ("sibling_disjoint", all(nodes[s + (0,)][1] & nodes[s + (1,)][1] == 0 for s in internal)),
        ("distinct_points", popcount(S) == 2 ** tree_height),
        ("clopen_trace", all(_clopen_in(ctx, U & S, S) for _, U in nodes.values())),
        ("T2_trace", _t2_trace(ctx, S)),
    ]
    points = tuple((_binary(s), nodes[s][0]) for s in sorted(nodes, key=lambda k: (len(k), k)))
    steps = step_budget - budget[0]
    return _report("S2", points, checks, depth, steps, notes=(("height", tree_height),))


def _clopen_in(ctx: _Ctx, C: int, S: int) -> bool:
    # the complement of C in S is a union of visible basic traces on S
    rest = S & ~C
    covered = 0
    for m in ctx.masks:
        t = m & S
        if t and t & C == 0:
            covered |= t
    return covered & rest == rest


def _t2_trace(ctx: _Ctx, S: int) -> bool:
    pts = list(bits(S))
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            na = [m & S for m in ctx.masks if m >> a & 1]
            nb = [m & S for m in ctx.masks if m >> b & 1]
            if not any(p & q == 0 for p in na for q in nb):
                return False
    return True


# ------------------------------------------------------------ perfect T_D

def classify_perfect_TD(space: Space, depth: int, count: int = 16, tree_height: int = 4) -> ExtractionReport:
    """Dispatch: chain -> SD; otherwise S1 or S2 on the maximal points, trying
    first the branch suggested by the interior of D and then the other."""
    depth = resolve_depth(space, depth)
    _perfect_td(space, depth)
    first = chain_or_max(space, depth)
    if first.tag == "SD":
        return first
    M = mask_of(first.points)
    within = None if M == full_mask(space, depth) else M
    D = d_set_mask(space, depth, within)
    tr = [m & (M if within else full_mask(space, depth)) for m in basic_masks(space, depth)]
    s1_first = any(t and t & ~D == 0 for t in tr)
    order = [("S1", lambda: extract_S1(space, depth, count, within)),
             ("S2", lambda: extract_S2(space, depth, tree_height, within, min_height=2))]
    if not s1_first:
        order.reverse()
    errors = []
    for name, run in order:
        try:
            return run()
        except (InconclusiveError, PreconditionError) as exc:
            errors.append(f"{name}: {exc}")
    raise InconclusiveError("; ".join(errors))


# ----------------------------------------------------------- dense opens / Baire

@dataclass(frozen=True)
class OpenFamily:
    """A countable family of open sets given by membership ``member(i, p)``.

    ``size`` is None for an infinite family; ``cofinite`` declares every member
    co-finite, which certifies density against certified-infinite basics.
    """

    name: str
    member: Callable[[int, int], bool]
    size: Optional[int] = None
    cofinite: bool = False

    def length(self, depth: int) -> int:
        return depth if self.size is None else min(self.size, depth)

    def mask(self, i: int, space, depth: int) -> int:
        return mask_of(p for p in range(n_points(space, depth)) if self.member(i, p))


def punctured() -> OpenFamily:
    """U_i = X minus the i-th point."""
    return OpenFamily("punctured", lambda i, p: p != i, None, cofinite=True)


def family_from_masks(masks, name: str = "given") -> OpenFamily:
    masks = tuple(m.mask if isinstance(m, PointSet) else m for m in masks)
    return OpenFamily(name, lambda i, p: bool(masks[i] >> p & 1), len(masks))


def _dense_at_depth(ctx: _Ctx, U: int, cofinite: bool) -> bool:
    s = presented(ctx.space)
    for i, m in enumerate(ctx.masks):
        if m and not m & U:
            if cofinite and s.basic_infinite is not None and s.basic_infinite(i):
                continue
            return False
    return True


def _f(n: int) -> int:
    return min(cantor_unpair(n)[0], n)


def baire_witness(space: Space, family: OpenFamily, depth: int, count: int = 32) -> ExtractionReport:
    """Perfect T_D Pi-2 set Y = {x_0, x_1, ...} from dense opens with empty
    intersection: x_{n+1} is the least new point of
    B(x_f(n), n) minus Cl({x_f(n)}) meeting U_0, ..., U_n."""
    ctx = _Ctx.of(space, depth)
    N = family.length(depth)
    Us = [family.mask(i, space, depth) for i in range(N)]
    for i, U in enumerate(Us):
        _require(_dense_at_depth(ctx, U, family.cofinite), f"U_{i} is not dense at depth {depth}")
    meet = ctx.full
    for U in Us:
        meet &= U
    _require(meet == 0, "the listed dense opens have a common visible point")

    xs = [lowest(ctx.full)]
    prefix = [ctx.full]  # prefix[n] = U_0 & ... & U_{n-1}
    for U in Us:
        prefix.append(prefix[-1] & U)
    while len(xs) < count:
        n = len(xs) - 1
        k = _f(n)
        V = ctx.nbhd(xs[k], n) & ~ctx.down[xs[k]]
        cand = V & prefix[min(n + 1, N)] & ~mask_of(xs)
        if not cand:
            raise InconclusiveError(f"V_{n} meets no new point of U_0..U_{n} at depth {depth}")
        xs.append(lowest(cand))
    Y = mask_of(xs)

    def exit_index(x):
        return next((i for i, U in enumerate(Us) if not U >> x & 1), None)

    closure_ok = True
    for x in xs:
        m = exit_index(x)
        if m is None:
            continue
        bad = [n for n in range(m + 1, count) if ctx.leq(xs[n], x) and xs[n] != x]
        if bad or popcount(ctx.down[x] & Y) > m + 1:
            closure_ok = False
    td_ok = all(any(b >> x & 1 and b & ctx.down[x] & Y == 1 << x for b in ctx.masks) for x in xs)
    perfect_ok = all(
        all(m & Y != 1 << x for m in ctx.masks if m >> x & 1) for x in xs
    )
    A_meet = ctx.full
    for n in range(N):
        A_meet &= mask_of(xs[: n + 1]) | prefix[n + 1]
    checks = [
        ("closure_finite", closure_ok),
        ("TD_trace", td_ok),
        ("perfect_trace", perfect_ok),
        ("pi2_trace", A_meet == Y),
    ]
    return _report("perfect_TD_Pi2", tuple(xs), checks, depth, count - 1,
                   notes=(("family", family.name),))


def default_presentation(space: Space, Y: int, depth: int):
    """Pi-2 presentation Y = meet_z (A_z | U_z) over visible z outside Y, with
    A_z the complement of a basic isolating z in its closure and U_z the
    complement of Cl({z})."""
    ctx = _Ctx.of(space, depth)
    pres = []
    for z in bits(ctx.full & ~Y):
        u = next((i for i, b in enumerate(ctx.masks) if b & ctx.down[z] == 1 << z), None)
        if u is None:
            raise PreconditionError(f"point {z} has no visible locally closed witness")
        pres.append((ctx.full & ~ctx.masks[u], ctx.full & ~ctx.down[z]))
    return pres


def dense_open_family(space: Space, Y, depth: int, count: Optional[int] = None,
                      presentation=None) -> ExtractionReport:
    """Dense opens W_i = C minus Cl_C({y_i}) and V_i = (Int_C(A_i) | U_i) & C of
    C = Cl(Y) whose joint intersection misses Y."""
    ctx = _Ctx.of(space, depth)
    Ym = Y.mask if isinstance(Y, PointSet) else (Y if isinstance(Y, int) else mask_of(Y))
    ys = list(bits(Ym))
    _require(len(ys) >= 2, "Y is not perfect: fewer than two visible points")
    if count is None:
        count = max(1, len(ys) // 2)
    head = ys[:count]
    for y in head:
        ok = all(m & Ym != 1 << y for m in ctx.masks if m >> y & 1)
        _require(ok, f"Y is not perfect at depth {depth}: point {y} is isolated")
        td = any(b >> y & 1 and b & ctx.down[y] & Ym == 1 << y for b in ctx.masks)
        _require(td, f"Y is not T_D at depth {depth}: point {y}")
    C = 0
    for y in ys:
        C |= ctx.down[y]
    if presentation is None:
        presentation = default_presentation(space, Ym, depth)
    tr = [m & C for m in ctx.masks if m & C]

    def open_in_C(S):
        cover = 0
        for t in tr:
            if t & ~S == 0:
                cover |= t
        return cover == S

    def dense_in_C(S):
        return all(t & S for t in tr)

    Ws = []
    for y in head:
        W = C & ~ctx.down[y]
        if not open_in_C(W):
            break
        Ws.append(W)
    if len(Ws) < 1:
        raise InconclusiveError(f"W_0 is not open at depth {depth}")
    Vs = []
    for Acl, U in presentation:
        intA = 0
        for t in tr:
            if t & ~Acl == 0:
                intA |= t
        Vs.append((intA | U) & C)
    meet = C
    for S in Ws + Vs:
        meet &= S
    used = mask_of(head[: len(Ws)])
    vmeet = C
    for V in Vs:
        vmeet &= V
    checks = [
        ("W_open", all(open_in_C(W) for W in Ws)),
        ("W_dense", all(dense_in_C(W) for W in Ws)),
        ("V_open", all(open_in_C(V) for V in Vs)),
        ("V_dense", all(dense_in_C(V) for V in Vs)),
        ("misses_Y", meet & used == 0),
        ("V_within_Y", vmeet & ~Ym == 0),
    ]
    return _report("dense_open_family", tuple(head[: len(Ws)]), checks, depth,
                   notes=(("W", len(Ws)), ("V", len(Vs))))


# ----------------------------------------------------------------- sobriety

def sober_witness(ambient: Space, depth: int, count: int = 6, lookahead: Optional[int] = None) -> ExtractionReport:
    """Points x_0, x_1, ... of X approaching the generic point g of
    plus_generic(X): V_{n+1} = U_{n+1} & B(g, n+1) & meet_i B(x_i, n+1)."""
    s = presented(ambient)
    _require(s.inner is not None and s.tag == "plus_generic", "ambient space must be plus_generic(X)")
    ctx = _Ctx.of(ambient, depth)
    g = 0
    X = ctx.full & ~1
    _require(irreducible_at_depth(ambient, depth, X), "X is not irreducible at depth")
    ev = sober_evidence(s.inner, depth)
    _require(ev.kind == "nonsober_evidence", f"X has a visible generic point ({ev.generic})")
    total = count + (count if lookahead is None else lookahead)

    def separator(x):
        return next((m for m in ctx.masks if m & 1 and not m >> x & 1), None)

    V = ctx.nbhd(g, 0)
    xs = [lowest(V & X)]
    Vs = [V]
    while len(xs) < total:
        n = len(xs) - 1
        U = Vs[-1]
        stuck = False
        for x in xs:
            sep = separator(x)
            if sep is None:
                stuck = True
                break
            U &= sep
        if not stuck:
            V = U & ctx.nbhd(g, n + 1)
            for x in xs:
                V &= ctx.nbhd(x, n + 1)
            cand = V & X & ~mask_of(xs)
        if stuck or not cand:
            if len(xs) >= count:
                break
            raise InconclusiveError(f"V_{n + 1} has no new point of X at depth {depth}")
        xs.append(lowest(cand))
        Vs.append(V)
    A, extra = xs[:count], xs[count:]

    closure_ok = all(not ctx.leq(A[i], A[n]) for n in range(count) for i in range(n + 1, count))
    perfect_ok = all(A[n + 1] in bits(ctx.nbhd(A[i], n + 1))
                     for n in range(count - 1) for i in range(n + 1))
    t2_ok = True
    for i in range(count):
        for j in range(count):
            for n in range(max(i, j), count - 1):
                both = ctx.nbhd(A[i], n + 1) & ctx.nbhd(A[j], n + 1)
                if any(not both >> A[m] & 1 for m in range(n + 1, count)):
                    t2_ok = False
    checks = [
        ("closure_finite", closure_ok),
        ("perfect_trace", perfect_ok),
        ("no_infinite_T2_trace", t2_ok),
    ]
    if _strict_chain(ctx, A):
        checks += [("strict_chain", True), ("upset_traces", _upset_traces(ctx, A))]
        tag = "SD"
    elif all(not ctx.leq(a, b) for a in A for b in A if a != b):
        checks += [("antichain", True), ("cofinite_trace", _cofinite_trace(ctx, A))]
        tag = "S1"
    else:
        raise InconclusiveError("emitted points are neither a chain nor an antichain")
    return _report(tag, tuple(A), checks, depth, len(xs),
                   notes=(("generic", g), ("lookahead", len(extra))))


# ---------------------------------------------------------------------- S0

@dataclass
class _Level:
    start: int
    x: dict = field(default_factory=dict)
    W: dict = field(default_factory=dict)
    t_exit: Optional[int] = None


def _konig_chain(ctx: _Ctx, levels: list) -> list:
    """Longest path in the tree T of the case-(b) levels: q(k) < t_k and the
    chosen points strictly increase along q."""
    closed = [lv for lv in levels if lv.t_exit is not None]
    best: list = []

    def dfs(k, path):
        nonlocal best
        if len(path) > len(best):
            best = list(path)
        if k == len(closed):
            return
        for t in range(closed[k].t_exit):
            x = closed[k].x.get(seq_unrank(t))
            if x is None:
                continue
            if path and not (ctx.leq(path[-1], x) and not ctx.leq(x, path[-1])):
                continue
            path.append(x)
            dfs(k + 1, path)
            path.pop()

    dfs(0, [])
    return best


def extract_S0(space: Space, depth: int, rank_budget: int = 20, step_budget: int = 10_000,
               start: Optional[int] = None) -> ExtractionReport:
    """Points x_s for all sequences s of rank <= rank_budget with
    x_s <= x_t iff t is a prefix of s, by the staged procedure with cases (a)
    and (b); phi is the identity enumeration of the points."""
    s = presented(space)
    _require(s.point_count is None, "hypothesis fails: a finite space has finite non-empty Delta-2 subsets")
    ctx = _Ctx.of(space, depth)
    A = ctx.full if start is None else start
    levels: list = []
    steps = 0
    k = 0
    reason = ""
    while True:
        if A == 0:
            reason = "A_k empty"
            break
        lv = _Level(start=A)
        levels.append(lv)
        lv.x[()] = lowest(A)
        lv.W[()] = A
        t = 1
        advanced = False
        while t <= rank_budget:
            steps += 1
            if steps > step_budget:
                raise InconclusiveError(_diag(ctx, levels, f"step budget {step_budget} exhausted"))
            seq = seq_unrank(t)
            sigma = seq[:-1]
            xs = lv.x[sigma]
            R = [seq_unrank(r) for r in range(t) if not is_prefix(seq_unrank(r), sigma)]
            W = lv.W[sigma] & ctx.down[xs] & ctx.nbhd(xs, t)
            for tau in R:
                W &= ~ctx.down[lv.x[tau]]
            cand = W & ~(1 << xs)
            for tau in R:
                cand &= ~ctx.up[lv.x[tau]]
            if cand:
                lv.x[seq] = lowest(cand)
                lv.W[seq] = W
                t += 1
                continue
            # case (b)
            ys = W & ~(1 << k) if k < ctx.depth else W
            if not ys:
                reason = f"W at level {k}, step {t} is finite at depth {depth}"
                break
            y = lowest(ys)
            u = next((i for i, m in enumerate(ctx.masks)
                      if m >> y & 1 and not (m & ctx.down[y]) >> k & 1), None)
            if u is None:
                raise InconclusiveError(f"no visible basic around {y} excludes point {k} from Cl({{{y}}})")
            lv.t_exit = t
            A = W & ctx.masks[u] & ctx.down[y]
            k += 1
            advanced = True
            break
        if not advanced:
            break
    lv = levels[-1]
    if lv.t_exit is None and len(lv.x) == rank_budget + 1:
        items = sorted(lv.x.items(), key=lambda kv: kv[1])
        order_ok = all(ctx.leq(lv.x[a], lv.x[b]) == is_prefix(b, a) for a in lv.x for b in lv.x)
        checks = [
            ("order_isomorphism", order_ok),
            ("distinct", len(set(lv.x.values())) == len(lv.x)),
            ("in_A_k", all(lv.start >> p & 1 for p in lv.x.values())),
        ]
        points = tuple((format_seq(sq), p) for sq, p in sorted(lv.x.items(), key=lambda kv: _rank(kv[0])))
        return _report("S0", points, checks, depth, steps, notes=(("level", len(levels) - 1),))
    return _contradiction(space, ctx, levels, depth, steps, reason)


def _rank(seq) -> int:
    from .seqnat import seq_rank
    return seq_rank(seq)


def _diag(ctx, levels, msg) -> str:
    chain = _konig_chain(ctx, levels)
    exits = [lv.t_exit for lv in levels if lv.t_exit is not None]
    return f"{msg}; case (b) at levels with t_k = {exits}; longest Konig chain {chain}"


def _contradiction(space, ctx, levels, depth, steps, reason) -> ExtractionReport:
    """The procedure could not continue: report an increasing chain (SD) from
    the tree of case-(b) levels, or from the chain construction directly."""
    chain = _konig_chain(ctx, levels)
    if len(chain) >= 2:
        checks = [("strict_chain", _strict_chain(ctx, chain)), ("upset_traces", _upset_traces(ctx, chain))]
        return _report("SD", tuple(chain), checks, depth, steps, notes=(("reason", reason), ("source", "konig")))
    try:
        rep = chain_or_max(space, depth)
    except (InconclusiveError, PreconditionError) as exc:
        raise InconclusiveError(f"{reason}; no chain found: {exc}") from exc
    if rep.tag != "SD":
        raise InconclusiveError(f"{reason}; no increasing chain visible")
    return ExtractionReport("SD", rep.points, rep.checks, depth, steps,
                            (("reason", reason), ("source", "chain")))


# ---------------------------------------------------------------- pipeline

@dataclass(frozen=True)
class Budgets:
    count: int = 16
    tree_height: int = 4
    rank_budget: int = 20
    step_budget: int = 10_000
    max_steps: int = 64


def classify_countable(space: Space, depth: int, budgets: Budgets = Budgets()) -> ExtractionReport:
    """Perfect T_D route (SD, S1, S2), then the Delta-3 condition
    (quasi-Polish evidence), then S0 extraction on a stuck derivative stage."""
    depth = resolve_depth(space, depth)
    notes = []
    perfect, td = is_perfect(space, depth), is_TD(space, depth)
    if perfect.holds and td.holds:
        try:
            return classify_perfect_TD(space, depth, budgets.count, budgets.tree_height)
        except (InconclusiveError, PreconditionError) as exc:
            notes.append(("perfect_TD", str(exc)))
    d3 = delta3_condition(space, depth, budgets.max_steps)
    if d3.holds:
        checks = [
            ("delta3_condition", True),
            ("no_perfect_TD_route", not (perfect.holds and td.holds)),
        ]
        return _report("quasi_polish", (), checks, depth,
                       notes=tuple(notes) + (("delta3", d3.status),))
    if d3.status == "fails":
        A = d3.witness[0].mask
        start = None if A == full_mask(space, depth) else A
        return extract_S0(space, depth, budgets.rank_budget, budgets.step_budget, start=start)
    raise InconclusiveError(f"nothing certified at depth {depth}: delta3 {d3.status}")
