"""Line-oriented space description files.

    kind finite            kind generator              kind table
    points 3               gen plus_generic S1         points 3
    subbasic 0: 0 1        dense punctured             subbasics 2
    subbasic 1: 1 2                                    10
                                                       11
                                                       01

``#`` starts a comment.  Generator terms: S0, S1, SD, S2, ``omega_lt n``,
``plus_generic <term>``, ``union <term> <term> ...`` and ``union omega_lt *``.
A ``dense punctured`` line or ``dense open: p q r`` lines attach a family of
dense opens for the Baire witness.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .extractors import OpenFamily, family_from_masks, punctured
from .generators import UnknownGenerator, disjoint_union, generator, omega_lt, plus_generic, union_omega_lt
from .space import FiniteSpace, Space, mask_of


class SpaceFileError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass
class SpaceFile:
    kind: str
    space: Space
    dense: Optional[OpenFamily] = None
    name: str = ""


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _int(tok: str, no: int, what: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise SpaceFileError(no, f"expected {what}, got {tok!r}") from None
    if v < 0:
        raise SpaceFileError(no, f"{what} must be non-negative")
    return v


def _term(toks: list, i: int, no: int):
    if i >= len(toks):
        raise SpaceFileError(no, "generator term expected")
    t = toks[i]
    if t in ("S0", "S1", "SD", "S2"):
        return generator(t), i + 1
    if t == "omega_lt":
        if i + 1 >= len(toks):
            raise SpaceFileError(no, "omega_lt needs n")
        n = _int(toks[i + 1], no, "n")
        if n < 1:
            raise SpaceFileError(no, "omega_lt needs n >= 1")
        return omega_lt(n), i + 2
    if t == "plus_generic":
        inner, j = _term(toks, i + 1, no)
        return plus_generic(inner), j
    if t == "union":
        if toks[i + 1:i + 3] == ["omega_lt", "*"]:
            return union_omega_lt(), i + 3
        parts, j = [], i + 1
        while j < len(toks):
            part, j = _term(toks, j, no)
            parts.append(part)
        if not parts:
            raise SpaceFileError(no, "union needs at least one part")
        return disjoint_union(parts), j
    raise SpaceFileError(no, f"unknown generator {t!r}")


def parse_space(text: str, name: str = "") -> SpaceFile:
    lines = list(_lines(text))
    if not lines:
        raise SpaceFileError(1, "empty space file")
    no, first = lines[0]
    head = first.split()
    if len(head) != 2 or head[0] != "kind" or head[1] not in ("finite", "generator", "table"):
        raise SpaceFileError(no, "first line must be 'kind finite|generator|table'")
    kind, rest = head[1], lines[1:]
    dense_lines = [(n, l) for n, l in rest if l.split()[0] == "dense"]
    rest = [(n, l) for n, l in rest if l.split()[0] != "dense"]
    if kind == "generator":
        space = _parse_generator(rest, no)
    elif kind == "finite":
        space = _parse_finite(rest, no, name)
    else:
        space = _parse_table(rest, no, name)
    return SpaceFile(kind, space, _parse_dense(dense_lines), name)


def _parse_generator(rest, no0):
    if len(rest) != 1:
        raise SpaceFileError(rest[1][0] if rest else no0, "a generator file has exactly one 'gen' line")
    no, line = rest[0]
    toks = line.split()
    if toks[0] != "gen":
        raise SpaceFileError(no, "expected 'gen <term>'")
    try:
        space, j = _term(toks, 1, no)
    except UnknownGenerator as exc:
        raise SpaceFileError(no, str(exc)) from None
    if j != len(toks):
        raise SpaceFileError(no, f"trailing tokens after generator: {' '.join(toks[j:])}")
    return space


def _points(rest, no0) -> int:
    if not rest:
        raise SpaceFileError(no0, "missing 'points n'")
    no, line = rest[0]
    toks = line.split()
    if len(toks) != 2 or toks[0] != "points":
        raise SpaceFileError(no, "expected 'points n'")
    return _int(toks[1], no, "point count")


def _parse_finite(rest, no0, name):
    n = _points(rest, no0)
    subs = {}
    for no, line in rest[1:]:
        head, sep, body = line.partition(":")
        toks = head.split()
        if not sep or len(toks) != 2 or toks[0] != "subbasic":
            raise SpaceFileError(no, "expected 'subbasic i: p q ...'")
        i = _int(toks[1], no, "subbasic index")
        if i in subs:
            raise SpaceFileError(no, f"subbasic {i} given twice")
        pts = [_int(t, no, "point") for t in body.split()]
        bad = [p for p in pts if p >= n]
        if bad:
            raise SpaceFileError(no, f"point {bad[0]} outside 0..{n - 1}")
        subs[i] = pts
    if sorted(subs) != list(range(len(subs))):
        raise SpaceFileError(rest[-1][0], "subbasic indices must be 0..m-1")
    if len(subs) > 16:
        raise SpaceFileError(rest[-1][0], "at most 16 subbasics")
    return FiniteSpace.from_subbasis(n, [subs[i] for i in range(len(subs))], tag=name or "finite")


def _parse_table(rest, no0, name):
    n = _points(rest, no0)
    if len(rest) < 2:
        raise SpaceFileError(no0, "missing 'subbasics m'")
    no, line = rest[1]
    toks = line.split()
    if len(toks) != 2 or toks[0] != "subbasics":
        raise SpaceFileError(no, "expected 'subbasics m'")
    m = _int(toks[1], no, "subbasic count")
    if m > 16:
        raise SpaceFileError(no, "at most 16 subbasics")
    rows = rest[2:]
    if len(rows) != n:
        raise SpaceFileError(rows[-1][0] if rows else no, f"expected {n} rows, found {len(rows)}")
    cols = [[] for _ in range(m)]
    for p, (no, row) in enumerate(rows):
        row = row.replace(" ", "")
        if len(row) != m or set(row) - {"0", "1"}:
            raise SpaceFileError(no, f"row {p} must be {m} bits")
        for s, ch in enumerate(row):
            if ch == "1":
                cols[s].append(p)
    return FiniteSpace.from_subbasis(n, cols, tag=name or "table")


def _parse_dense(lines) -> Optional[OpenFamily]:
    if not lines:
        return None
    if len(lines) == 1 and lines[0][1].split() == ["dense", "punctured"]:
        return punctured()
    masks = []
    for no, line in lines:
        head, sep, body = line.partition(":")
        if head.split() != ["dense", "open"] or not sep:
            raise SpaceFileError(no, "expected 'dense punctured' or 'dense open: p q ...'")
        masks.append(mask_of(_int(t, no, "point") for t in body.split()))
    return family_from_masks(masks, "listed")


def load_space(path) -> SpaceFile:
    path = Path(path)
    return parse_space(path.read_text(), path.stem)
