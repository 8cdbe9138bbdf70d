"""Finite-level Borel expressions in difference form, their evaluation inside a
truncation, the diagonal construction for finite T0 spaces and the search for
a cover member with non-empty interior.

Levels follow the difference-form definition: a Sigma-n set (n > 1) is a
union of differences ``B \\ B'`` whose components are Sigma-m with m < n, and a
Pi-n set is the complement of a Sigma-n set.  Countable unions become finite
lists at a truncation.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Optional

from .seqnat import bits, cantor_pair
from .space import (
    FiniteSpace,
    PointSet,
    Space,
    basic_masks,
    full_mask,
    lowest,
    n_basics,
    n_points,
    presented,
)

MAX_LEVEL = 3


class LevelError(ValueError):
    """Raised for an expression whose declared level does not match its shape."""


@dataclass(frozen=True)
class BorelExpr:
    kind: str  # basic | meet | union | sigma | complement | delta
    level: tuple  # (class, n) with class in Sigma/Pi/Delta
    index: int = -1
    children: tuple = ()
    pairs: tuple = ()

    def __str__(self) -> str:
        return to_text(self)

    def size(self) -> int:
        if self.kind == "basic":
            return 1
        if self.kind == "sigma":
            return 1 + sum(a.size() + b.size() for a, b in self.pairs)
        return 1 + sum(c.size() for c in self.children)

    def max_index(self) -> int:
        if self.kind == "basic":
            return self.index
        subs = [e for p in self.pairs for e in p] + list(self.children)
        return max((e.max_index() for e in subs), default=-1)


def _open(e: BorelExpr) -> bool:
    return e.level == ("Sigma", 1)


def Basic(k: int) -> BorelExpr:
    if k < 0:
        raise ValueError("basic index must be non-negative")
    return BorelExpr("basic", ("Sigma", 1), index=k)


def Meet(children) -> BorelExpr:
    """Finite intersection of opens (still open)."""
    children = tuple(children)
    if not children:
        raise LevelError("meet needs at least one open")
    if not all(_open(c) for c in children):
        raise LevelError("meet components must be Sigma-1")
    return BorelExpr("meet", ("Sigma", 1), children=children)


def Union(children) -> BorelExpr:
    """Union of expressions of one Sigma level (empty union: the empty open)."""
    children = tuple(children)
    levels = {c.level for c in children} or {("Sigma", 1)}
    if len(levels) != 1 or next(iter(levels))[0] != "Sigma":
        raise LevelError("union components must share one Sigma level")
    return BorelExpr("union", next(iter(levels)), children=children)


def Sigma(n: int, pairs) -> BorelExpr:
    """Sigma-n set as the union of the differences a \\ b over ``pairs``."""
    if not 2 <= n <= MAX_LEVEL:
        raise LevelError(f"Sigma level must be in 2..{MAX_LEVEL}")
    pairs = tuple((a, b) for a, b in pairs)
    for a, b in pairs:
        for c in (a, b):
            if c.level[0] != "Sigma" or c.level[1] >= n:
                raise LevelError(f"Sigma-{n} difference components must be Sigma-m, m < {n}; got {c.level}")
    return BorelExpr("sigma", ("Sigma", n), pairs=pairs)


def Diff(a: BorelExpr, b: BorelExpr) -> BorelExpr:
    """The single difference a \\ b at the least admissible level."""
    n = max(a.level[1], b.level[1]) + 1
    return Sigma(n, [(a, b)])


def Complement(e: BorelExpr) -> BorelExpr:
    if e.level[0] != "Sigma":
        raise LevelError("complement is taken of a Sigma expression")
    return BorelExpr("complement", ("Pi", e.level[1]), children=(e,))


def Pi(n: int, e: BorelExpr) -> BorelExpr:
    if e.level != ("Sigma", n):
        raise LevelError(f"Pi-{n} needs a Sigma-{n} body, got {e.level}")
    return Complement(e)


def Delta(n: int, sigma: BorelExpr, pi: BorelExpr) -> BorelExpr:
    """A Delta-n set given by a Sigma-n and a Pi-n expression meant to agree;
    agreement is checked extensionally by :func:`check_delta`."""
    if sigma.level != ("Sigma", n) or pi.level != ("Pi", n):
        raise LevelError(f"Delta-{n} needs a Sigma-{n} and a Pi-{n} expression")
    return BorelExpr("delta", ("Delta", n), children=(sigma, pi))


# ------------------------------------------------------------------ evaluation

def extension(expr: BorelExpr, space: Space, depth: int) -> int:
    """Bitset of the visible points of ``expr`` inside the truncation."""
    if expr.max_index() >= n_basics(space, depth):
        raise ValueError(f"basic index {expr.max_index()} outside the truncation")
    masks = basic_masks(space, depth)
    full = full_mask(space, depth)
    return _ext(expr, masks, full)


def _ext(e: BorelExpr, masks, full) -> int:
    k = e.kind
    if k == "basic":
        return masks[e.index]
    if k == "meet":
        out = full
        for c in e.children:
            out &= _ext(c, masks, full)
        return out
    if k == "union":
        out = 0
        for c in e.children:
            out |= _ext(c, masks, full)
        return out
    if k == "sigma":
        out = 0
        for a, b in e.pairs:
            out |= _ext(a, masks, full) & ~_ext(b, masks, full)
        return out
    if k == "complement":
        return full & ~_ext(e.children[0], masks, full)
    if k == "delta":
        return _ext(e.children[0], masks, full)
    raise ValueError(f"unknown node kind {k}")


def eval(expr: BorelExpr, space: Space, x: int, depth: int) -> bool:  # noqa: A001
    if not 0 <= x < n_points(space, depth):
        raise ValueError(f"point {x} outside the truncation")
    return bool(extension(expr, space, depth) >> x & 1)


def check_delta(expr: BorelExpr, space: Space, depth: int) -> bool:
    s, p = expr.children
    return extension(s, space, depth) == extension(p, space, depth)


# ------------------------------------------------------------------ text syntax

_TOKEN = re.compile(r"\s*(?:(basic)\s+(\d+)|b(\d+)|([a-z]+\d?)\s*\(|(\()|(\))|(,))")


def parse(text: str) -> BorelExpr:
    """Parse prefix notation such as ``sigma2(diff(b3,b5), diff(b0,b1))``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected input at column {pos + 1}: {text[pos:pos + 12]!r}")
        if m.group(2) is not None:
            toks.append(("basic", int(m.group(2))))
        elif m.group(3) is not None:
            toks.append(("basic", int(m.group(3))))
        elif m.group(4) is not None:
            toks.append(("call", m.group(4)))
        elif m.group(6):
            toks.append((")", None))
        elif m.group(7):
            toks.append((",", None))
        else:
            raise ValueError(f"stray parenthesis at column {pos + 1}")
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    expr, i = _parse_at(toks, 0)
    if i != len(toks):
        raise ValueError("trailing input after expression")
    return expr


def _parse_args(toks, i):
    args = []
    if i < len(toks) and toks[i][0] == ")":
        return args, i + 1
    while True:
        e, i = _parse_at(toks, i)
        args.append(e)
        if i >= len(toks):
            raise ValueError("unclosed parenthesis")
        if toks[i][0] == ")":
            return args, i + 1
        if toks[i][0] != ",":
            raise ValueError("expected ',' or ')'")
        i += 1


def _parse_at(toks, i):
    if i >= len(toks):
        raise ValueError("unexpected end of expression")
    kind, val = toks[i]
    if kind == "basic":
        return Basic(val), i + 1
    if kind != "call":
        raise ValueError(f"unexpected token {kind!r}")
    args, j = _parse_args(toks, i + 1)
    name = val
    if name == "meet":
        return Meet(args), j
    if name == "union":
        return Union(args), j
    if name == "diff":
        if len(args) != 2:
            raise ValueError("diff takes two arguments")
        return Diff(*args), j
    m = re.fullmatch(r"(sigma|pi|delta)(\d)", name)
    if not m:
        raise ValueError(f"unknown operator {name!r}")
    n = int(m.group(2))
    if m.group(1) == "sigma":
        pairs = []
        for a in args:
            if a.kind != "sigma" or len(a.pairs) != 1:
                raise LevelError(f"sigma{n} takes diff(...) entries")
            pairs.append(a.pairs[0])
        return Sigma(n, pairs), j
    if m.group(1) == "pi":
        if len(args) != 1:
            raise ValueError("pi takes one argument")
        body = args[0]
        if body.level[1] < n and body.level[0] == "Sigma":
            body = _lift(body, n)
        return Pi(n, body), j
    if len(args) != 2:
        raise ValueError("delta takes a sigma and a pi argument")
    return Delta(n, *args), j


def _lift(e: BorelExpr, n: int) -> BorelExpr:
    """Re-express a lower Sigma set at Sigma level n as e \\ (empty open)."""
    return Sigma(n, [(e, Union([]))])


def to_text(e: BorelExpr) -> str:
    k = e.kind
    if k == "basic":
        return f"b{e.index}"
    if k in ("meet", "union"):
        return f"{k}(" + ",".join(to_text(c) for c in e.children) + ")"
    if k == "sigma":
        return f"sigma{e.level[1]}(" + ",".join(
            f"diff({to_text(a)},{to_text(b)})" for a, b in e.pairs) + ")"
    if k == "complement":
        return f"pi{e.level[1]}({to_text(e.children[0])})"
    return f"delta{e.level[1]}({to_text(e.children[0])},{to_text(e.children[1])})"


# ----------------------------------------------------------- random expressions

def _rand_sigma(rng, n_basic, level):
    if level == 1:
        r = rng.random()
        if r < 0.5:
            return Basic(rng.randrange(n_basic))
        op = Meet if r < 0.75 else Union
        return op([Basic(rng.randrange(n_basic)) for _ in range(2)])
    pairs = []
    for _ in range(rng.randint(1, 2)):
        pairs.append((_rand_sigma(rng, n_basic, rng.randint(1, level - 1)),
                      _rand_sigma(rng, n_basic, rng.randint(1, level - 1))))
    return Sigma(level, pairs)


def random_expr(rng: random.Random, n_basic: int, level: int, budget: int = 6) -> BorelExpr:
    """A random Sigma or Pi expression of the given level (1..3) with at most
    ``budget`` nodes, used by the property suites."""
    while True:
        e = _rand_sigma(rng, n_basic, level)
        if rng.random() < 0.3:
            e = Complement(e)
        if e.size() <= budget:
            return e


# --------------------------------------------------------- finite constructions

@dataclass(frozen=True)
class SingletonWitness:
    U: PointSet
    V: PointSet


def singleton_sigma2_witness(space: FiniteSpace, x: int) -> SingletonWitness:
    """Opens U, V with {x} = U \\ V: U the least open around x, V the part of U
    outside the closure of x."""
    U = space.min_open(x)
    V = U & ~space.closure_mask(1 << x)
    if U & ~V != 1 << x:
        raise ValueError(f"space is not T0 at point {x}")
    n = space.point_count
    return SingletonWitness(PointSet.from_bits(U, n), PointSet.from_bits(V, n))


def _containing(space: FiniteSpace, x: int) -> list:
    return [i for i, b in enumerate(space.basis) if b >> x & 1]


def _avoiding(space: FiniteSpace, x: int) -> list:
    return [i for i, b in enumerate(space.basis) if b and not b >> x & 1]


@dataclass(frozen=True)
class DiagonalWitness:
    product: FiniteSpace
    expr: BorelExpr


def diagonal_sigma2(space: FiniteSpace) -> DiagonalWitness:
    """Sigma-2 expression for the diagonal of X x X as the union over x of
    (U_x \\ V_x) x (U_x \\ V_x), written with rectangle basics."""
    P = space.product(space)
    pairs = []
    for x in range(space.point_count):
        ins = _containing(space, x)
        outs = _avoiding(space, x)
        U = Meet([Basic(cantor_pair(i, 0)) for i in ins] + [Basic(cantor_pair(0, j)) for j in ins])
        V = Union([Basic(cantor_pair(i, 0)) for i in outs] + [Basic(cantor_pair(0, j)) for j in outs])
        pairs.append((U, V))
    expr = Sigma(2, pairs)
    n = space.point_count
    diag = 0
    for x in range(n):
        diag |= 1 << (x * n + x)
    if extension(expr, P, len(P.basis) + P.point_count) != diag:
        raise ValueError("space is not T0; the diagonal is not Sigma-2 this way")
    return DiagonalWitness(P, expr)


@dataclass(frozen=True)
class CoverInterior:
    index: int
    basic: int
    open: PointSet


def sigma2_cover_interior(space: FiniteSpace, cover) -> CoverInterior:
    """Least i such that cover[i] has non-empty interior, with the least basic
    open inside it."""
    depth = max(space.point_count, len(space.basis))
    exts = [extension(e, space, depth) for e in cover]
    union = 0
    for m in exts:
        union |= m
    if union != space.full:
        missing = sorted(bits(space.full & ~union))
        raise ValueError(f"cover misses points {missing}")
    for i, m in enumerate(exts):
        for k, b in enumerate(space.basis):
            if b and b & ~m == 0:
                return CoverInterior(i, k, PointSet.from_bits(b, space.point_count))
    raise RuntimeError("no cover member has interior; the space is not Baire")
