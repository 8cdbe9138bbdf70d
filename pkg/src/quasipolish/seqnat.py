"""Pairing functions, finite-set codes and the rank bijection on finite sequences.

Finite sequences of naturals are plain tuples; ``()`` is the empty sequence.
"""
from __future__ import annotations

import re
from functools import lru_cache
from math import isqrt
from typing import Iterator

SeqNat = tuple


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(n: int) -> tuple[int, int]:
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def finite_set(code: int) -> frozenset[int]:
    """Positions of the 1-bits of ``code``."""
    return frozenset(bits(code))


def bits(code: int) -> Iterator[int]:
    i = 0
    while code:
        if code & 1:
            yield i
        code >>= 1
        i += 1


def finite_set_code(members) -> int:
    code = 0
    for m in members:
        code |= 1 << m
    return code


def seq_rank(seq: SeqNat) -> int:
    # rank(()) = 0, rank(s + (n,)) = pair(rank(s), n) + 1
    r = 0
    for n in seq:
        r = cantor_pair(r, n) + 1
    return r


@lru_cache(maxsize=1 << 16)
def seq_unrank(r: int) -> SeqNat:
    if r == 0:
        return ()
    a, n = cantor_unpair(r - 1)
    return seq_unrank(a) + (n,)


def is_prefix(p: SeqNat, q: SeqNat) -> bool:
    return len(p) <= len(q) and q[: len(p)] == p


def zeros(m: int) -> SeqNat:
    return (0,) * m


def format_seq(seq: SeqNat) -> str:
    return "(" + ",".join(str(n) for n in seq) + ")"


_SEQ_RE = re.compile(r"^\(\s*(\d+(\s*,\s*\d+)*)?\s*\)$")


def parse_seq(text: str) -> SeqNat:
    text = text.strip()
    if not _SEQ_RE.match(text):
        raise ValueError(f"not a sequence literal: {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ()
    return tuple(int(part) for part in inner.split(","))
