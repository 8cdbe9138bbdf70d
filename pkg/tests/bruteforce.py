"""Independent brute-force oracles on finite spaces.

Everything here works on frozensets of points and never calls the library's
order, derivative or evaluation code.
"""
from __future__ import annotations

from itertools import combinations, product


def subsets(points):
    points = list(points)
    for k in range(len(points) + 1):
        for c in combinations(points, k):
            yield frozenset(c)


def basis_from_subbasis(n, subbasis):
    """Basic k = intersection of the subbasics at the 1-bits of k."""
    full = frozenset(range(n))
    out = []
    for k in range(1 << len(subbasis)):
        s = full
        for j, sb in enumerate(subbasis):
            if k >> j & 1:
                s = s & frozenset(sb)
        out.append(s)
    return out


def opens_of_basis(n, basis):
    """All unions of basis members."""
    opens = set()
    for S in subsets(range(n)):
        if frozenset().union(*[b for b in basis if b <= S]) == S:
            opens.add(S)
    return opens


def closed_sets(n, opens):
    full = frozenset(range(n))
    return {full - U for U in opens}


def closure(n, opens, S):
    full = frozenset(range(n))
    out = full
    for U in opens:
        if not U & S:
            out &= full - U
    return out


def interior(opens, S):
    return frozenset().union(*[U for U in opens if U <= S])


def locally_closed_in(n, opens, x, A):
    """{x} locally closed in the subspace A: some open U has U & Cl_A{x} = {x}."""
    cl = closure(n, opens, frozenset([x])) & A
    return any(U & cl == {x} for U in opens)


def is_TD(n, opens):
    full = frozenset(range(n))
    return all(locally_closed_in(n, opens, x, full) for x in range(n))


def is_sober(n, opens):
    for C in closed_sets(n, opens):
        if not C:
            continue
        proper = [D for D in closed_sets(n, opens) if D < C]
        if any(a | b == C for a in proper for b in proper):
            continue
        if len([x for x in C if closure(n, opens, frozenset([x])) == C]) != 1:
            return False
    return True


def derivative_rank(n, opens):
    A = frozenset(range(n))
    k = 0
    while True:
        B = frozenset(x for x in A if not locally_closed_in(n, opens, x, A))
        if B == A:
            return k
        A, k = B, k + 1


def delta3_condition(n, opens):
    """Every non-empty subset has a point that is locally closed in it."""
    return all(any(locally_closed_in(n, opens, x, A) for x in A)
               for A in subsets(range(n)) if A)


def labeled_posets(n):
    """All partial orders on range(n) as sets of pairs (x, y) meaning x <= y."""
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    out = []
    for choice in product((False, True), repeat=len(pairs)):
        rel = {(x, x) for x in range(n)} | {p for p, c in zip(pairs, choice) if c}
        if any((y, x) in rel for (x, y) in rel if x != y):
            continue
        if any((x, z) not in rel for (x, y) in rel for (y2, z) in rel if y == y2):
            continue
        out.append(frozenset(rel))
    return out


def upset_opens(n, rel):
    return {S for S in subsets(range(n)) if all(y in S for (x, y) in rel if x in S)}


# ---------------------------------------------------------------- expressions

def eval_expr(e, basis):
    """Set-theoretic meaning of an expression tree over explicit basic sets."""
    full = basis[0]
    if e.kind == "basic":
        return basis[e.index]
    if e.kind == "meet":
        out = full
        for c in e.children:
            out = out & eval_expr(c, basis)
        return out
    if e.kind == "union":
        return frozenset().union(*[eval_expr(c, basis) for c in e.children])
    if e.kind == "sigma":
        return frozenset().union(*[eval_expr(a, basis) - eval_expr(b, basis) for a, b in e.pairs])
    if e.kind == "complement":
        return full - eval_expr(e.children[0], basis)
    if e.kind == "delta":
        return eval_expr(e.children[0], basis)
    raise ValueError(e.kind)


# ------------------------------------------------------------------------ S0

def up_union_member(p, seq):
    """seq extends 0^n + (p(n)+1) for some n < len(p)."""
    return any(tuple(seq[: n + 1]) == (0,) * n + (p[n] + 1,) for n in range(len(p)))


def prefix_minimal(seqs):
    seqs = set(seqs)
    return {s for s in seqs if not any(s[:k] in seqs for k in range(len(s)))}
