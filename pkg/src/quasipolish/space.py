"""Finite and countably presented spaces, truncations and the neighbourhood operator.

A presented space exposes a basis through a total membership predicate
``mem(point, basic_index)``.  Every depth-relative operation looks only at
points ``0..depth-1`` and basic opens ``0..depth-1``; point sets inside a
truncation are handled as Python int bitsets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping, Optional, Union

from .seqnat import bits, cantor_pair, cantor_unpair


@dataclass(frozen=True)
class PointSet:
    members: frozenset
    depth: int

    def __post_init__(self):
        bad = [p for p in self.members if not 0 <= p < self.depth]
        if bad:
            raise ValueError(f"points {sorted(bad)} outside truncation {self.depth}")

    @classmethod
    def from_bits(cls, mask: int, depth: int) -> "PointSet":
        return cls(frozenset(bits(mask)), depth)

    @property
    def mask(self) -> int:
        m = 0
        for p in self.members:
            m |= 1 << p
        return m

    def __contains__(self, p) -> bool:
        return p in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def popcount(m: int) -> int:
    return bin(m).count("1")


def lowest(m: int) -> int:
    return (m & -m).bit_length() - 1


@dataclass(frozen=True, eq=False)
class PresentedSpace:
    """A countable space given by a membership oracle for an enumerated basis.

    ``point_count``/``basic_count`` are ``None`` for an infinite enumeration.
    Optional exact oracles:

    * ``leq_oracle(x, y)``: x is in the closure of y;
    * ``lc_oracle(x, stage)``: {x} is locally closed in the ``stage``-th
      locally-closed-singleton derivative of the space;
    * ``basic_infinite(i)``: basic open i has infinitely many points.
    """

    tag: str
    mem: Callable[[int, int], bool]
    point_count: Optional[int] = None
    basic_count: Optional[int] = None
    leq_oracle: Optional[Callable[[int, int], bool]] = None
    lc_oracle: Optional[Callable[[int, int], bool]] = None
    basic_infinite: Optional[Callable[[int], bool]] = None
    facts: Mapping[str, bool] = field(default_factory=dict)
    label: Callable[[int], str] = str
    parts: tuple = ()
    inner: Optional["PresentedSpace"] = None
    params: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"PresentedSpace({self.tag})"


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    """A finite space on points ``0..point_count-1``.

    ``basis[i]`` is a bitmask; ``basis[0]`` is the whole space.  The open sets
    are exactly the unions of basis members.
    """

    point_count: int
    basis: tuple
    tag: str = "finite"
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        full = (1 << self.point_count) - 1
        if not self.basis or self.basis[0] != full:
            raise ValueError("basis[0] must be the whole point set")
        if any(b & ~full for b in self.basis):
            raise ValueError("basis member outside the point set")

    @property
    def full(self) -> int:
        return (1 << self.point_count) - 1

    @classmethod
    def from_subbasis(cls, point_count: int, subbasis, tag: str = "finite") -> "FiniteSpace":
        """Topology generated by ``subbasis``; basic index k is the meet of the
        subbasics at the 1-bits of k."""
        subs = [mask_of(s) for s in subbasis]
        full = (1 << point_count) - 1
        for s in subs:
            if s & ~full:
                raise ValueError("subbasic set outside the point set")
        basis = [full] * (1 << len(subs))
        for k in range(1, len(basis)):
            j = lowest(k)
            basis[k] = basis[k & (k - 1)] & subs[j]
        return cls(point_count, tuple(basis), tag)

    @classmethod
    def from_opens(cls, point_count: int, opens) -> "FiniteSpace":
        full = (1 << point_count) - 1
        masks = sorted({mask_of(o) for o in opens} - {full})
        return cls(point_count, (full, *masks))

    @classmethod
    def from_preorder(cls, point_count: int, leq: Callable[[int, int], bool]) -> "FiniteSpace":
        """Alexandrov space of a preorder given as ``leq(x, y)`` (x below y);
        opens are the up-sets."""
        full = (1 << point_count) - 1
        ups = [mask_of(y for y in range(point_count) if leq(x, y)) for x in range(point_count)]
        return cls(point_count, (full, *ups))

    def min_open(self, x: int) -> int:
        cache = self._cache.setdefault("min_open", {})
        if x not in cache:
            m = self.full
            for b in self.basis:
                if b >> x & 1:
                    m &= b
            cache[x] = m
        return cache[x]

    def is_open(self, mask: int) -> bool:
        return all(self.min_open(x) & ~mask == 0 for x in bits(mask))

    def is_closed(self, mask: int) -> bool:
        return self.is_open(self.full & ~mask)

    def opens(self) -> frozenset:
        """All open sets as bitmasks (exhaustive; meant for small spaces)."""
        if "opens" not in self._cache:
            self._cache["opens"] = frozenset(
                m for m in range(1 << self.point_count) if self.is_open(m)
            )
        return self._cache["opens"]

    def closed_sets(self) -> frozenset:
        return frozenset(self.full & ~u for u in self.opens())

    def leq(self, x: int, y: int) -> bool:
        """Specialization order: x lies in the closure of {y}."""
        return bool(self.min_open(x) >> y & 1)

    def closure_mask(self, mask: int) -> int:
        return mask_of(y for y in range(self.point_count) if any(self.leq(y, x) for x in bits(mask)))

    def interior_mask(self, mask: int) -> int:
        return mask_of(x for x in bits(mask) if self.min_open(x) & ~mask == 0)

    def product(self, other: "FiniteSpace") -> "FiniteSpace":
        """Product space; point (x, y) is ``x * other.point_count + y`` and the
        basic open with index ``cantor_pair(i, j)`` is ``basis[i] x other.basis[j]``."""
        m = other.point_count
        na, nb = len(self.basis), len(other.basis)
        size = cantor_pair(na - 1, nb - 1) + 1
        basis = []
        for k in range(size):
            i, j = cantor_unpair(k)
            if i < na and j < nb:
                basis.append(rectangle(self.basis[i], other.basis[j], m))
            else:
                basis.append(0)
        return FiniteSpace(self.point_count * m, tuple(basis), f"{self.tag}x{other.tag}")


def rectangle(a: int, b: int, m: int) -> int:
    out = 0
    for x in bits(a):
        out |= b << (x * m)
    return out


def make_finite_from_subbasis(point_count: int, subbasis) -> FiniteSpace:
    return FiniteSpace.from_subbasis(point_count, subbasis)


Space = Union[PresentedSpace, FiniteSpace]


def presented(space: Space) -> PresentedSpace:
    """View a finite space through the presented-space interface."""
    if isinstance(space, PresentedSpace):
        return space
    cache = space._cache
    if "presented" not in cache:
        basis = space.basis
        cache["presented"] = PresentedSpace(
            tag=space.tag,
            mem=lambda p, i: bool(basis[i] >> p & 1),
            point_count=space.point_count,
            basic_count=len(basis),
            leq_oracle=space.leq,
            basic_infinite=lambda i: False,
            params=(space,),
        )
    return cache["presented"]


def finite_of(space: Space) -> Optional[FiniteSpace]:
    if isinstance(space, FiniteSpace):
        return space
    if space.params and isinstance(space.params[0], FiniteSpace):
        return space.params[0]
    return None


# ---------------------------------------------------------------- truncations

def n_points(space: Space, depth: int) -> int:
    s = presented(space)
    return depth if s.point_count is None else min(depth, s.point_count)


def n_basics(space: Space, depth: int) -> int:
    s = presented(space)
    return depth if s.basic_count is None else min(depth, s.basic_count)


def full_mask(space: Space, depth: int) -> int:
    return (1 << n_points(space, depth)) - 1


def exhaustive(space: Space, depth: int) -> bool:
    """True when the truncation shows every point and every basic open."""
    s = presented(space)
    return (
        s.point_count is not None
        and s.basic_count is not None
        and s.point_count <= depth
        and s.basic_count <= depth
    )


def basic_masks(space: Space, depth: int) -> tuple:
    """Bitset of visible members of each visible basic open."""
    s = presented(space)
    key = ("basic_masks", depth)
    if key not in s._cache:
        npts, nb = n_points(s, depth), n_basics(s, depth)
        s._cache[key] = tuple(
            mask_of(p for p in range(npts) if s.mem(p, i)) for i in range(nb)
        )
    return s._cache[key]


def containing(space: Space, x: int, depth: int) -> list[int]:
    """Indices of visible basic opens containing x."""
    return [i for i, b in enumerate(basic_masks(space, depth)) if b >> x & 1]


def basic_open(space: Space, i: int, depth: int) -> PointSet:
    if not 0 <= i < depth:
        raise ValueError(f"basic index {i} outside depth {depth}")
    masks = basic_masks(space, depth)
    if i >= len(masks):
        raise ValueError(f"space has only {len(masks)} basic opens")
    return PointSet.from_bits(masks[i], depth)


def nbhd_mask(space: Space, x: int, n: int, depth: int) -> int:
    """Bitset of B(x, n): the meet of the basics with index <= n that contain x."""
    m = full_mask(space, depth)
    for i, b in enumerate(basic_masks(space, depth)[: n + 1]):
        if b >> x & 1:
            m &= b
    return m


def basis_nbhd(space: Space, x: int, n: int, depth: int) -> PointSet:
    if not (0 <= x < depth and 0 <= n < depth):
        raise ValueError("point and index must lie inside the truncation")
    return PointSet.from_bits(nbhd_mask(space, x, n, depth), depth)


def all_subsets(n: int):
    for k in range(n + 1):
        yield from combinations(range(n), k)
