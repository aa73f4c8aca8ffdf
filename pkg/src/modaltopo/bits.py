"""Point sets as integer bitmasks.

Bit ``i`` of a mask is set when point ``i`` belongs to the set.  Every
structure in this package (frames, spaces, valuations) stores point sets
this way.
"""
from __future__ import annotations

from typing import Iterable, Iterator


def mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        if p < 0:
            raise ValueError(f"negative point index {p}")
        m |= 1 << p
    return m


def members(m: int) -> list[int]:
    """Sorted list of the points in ``m``."""
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return out


def iter_bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def full(n: int) -> int:
    return (1 << n) - 1


def popcount(m: int) -> int:
    return bin(m).count("1")


def subsets(m: int) -> Iterator[int]:
    """All submasks of ``m``, including 0 and ``m`` itself."""
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


def lowest(m: int) -> int:
    return (m & -m).bit_length() - 1
