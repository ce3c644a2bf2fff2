"""Bitmask helpers for subsets of a ground set.

Vertex ``v`` of ``[m] = {1, ..., m}`` is stored as bit ``v - 1``.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask of a collection of 1-based vertices."""
    out = 0
    for v in vertices:
        if v < 1:
            raise ValueError(f"vertex {v} is not positive")
        out |= 1 << (v - 1)
    return out


def bits(mask: int) -> list[int]:
    """0-based bit positions of ``mask`` in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def vertices_of(mask: int) -> list[int]:
    """1-based vertices of ``mask`` in increasing order."""
    return [b + 1 for b in bits(mask)]


def full(m: int) -> int:
    return (1 << m) - 1


def size(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, starting with ``mask`` and ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def masks_of_size(ground: int, k: int) -> list[int]:
    return [s for s in submasks(ground) if s.bit_count() == k]


def lex_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Sort key: by size, then lexicographically on the sorted vertex list."""
    return (mask.bit_count(), tuple(bits(mask)))


def fmt(mask: int) -> str:
    """Human form such as ``{1,3}``; the empty set prints as ``{}``."""
    return "{" + ",".join(str(v) for v in vertices_of(mask)) + "}"


def count_below(mask: int, v: int) -> int:
    """Number of elements of ``mask`` strictly below bit ``v``."""
    return (mask & ((1 << v) - 1)).bit_count()


def shuffle_sign(a: int, b: int) -> int:
    """Sign of the permutation sorting the concatenation of ascending ``a`` then ``b``.

    The sets must be disjoint.  Equals ``(-1)`` to the number of pairs
    ``x in a, y in b`` with ``x > y``.
    """
    if a & b:
        raise ValueError("shuffle sign needs disjoint sets")
    inv = 0
    for y in bits(b):
        inv += (a >> (y + 1)).bit_count()
    return -1 if inv & 1 else 1


def permutation_sign(seq: list[int]) -> int:
    """Sign of a sequence of distinct integers relative to its sorted order."""
    seq = list(seq)
    sign = 1
    seen = [False] * len(seq)
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    for start in range(len(seq)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
