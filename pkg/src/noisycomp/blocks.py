"""Mixed-radix conversions between symbol blocks and flat indices.

Blocks are tuples of symbols from 0..base-1; indices are lexicographic
(big-endian), so index 0 is the all-zero block.
"""
from __future__ import annotations

import itertools
from typing import Iterator

BlockT = tuple[int, ...]


def index_of(block: BlockT, base: int) -> int:
    i = 0
    for a in block:
        i = i * base + int(a)
    return i


def block_of(index: int, base: int, n: int) -> BlockT:
    index = int(index)  # keep symbols native ints even for numpy indices
    out = [0] * n
    for pos in range(n - 1, -1, -1):
        index, out[pos] = divmod(index, base)
    return tuple(out)


def all_blocks(base: int, n: int) -> Iterator[BlockT]:
    return itertools.product(range(base), repeat=n)
