"""Constant-time detection: is there a length-m substring with exactly c ones?

The table's min and max columns both climb from 0 in unit steps, so each is
stored as a bitvector of increments; the value at ``m`` is a rank query.
"""

from __future__ import annotations

import struct

import numpy as np

from .bitvector import BitVector
from .jumbled_table import JumbledTable

MAGIC = b"BJPM"
VERSION = 1


class InvariantError(RuntimeError):
    """A table or index violated a structural invariant."""


class DetectIndex:
    __slots__ = ("n", "bmin", "bmax")

    def __init__(self, n: int, bmin: BitVector, bmax: BitVector):
        if len(bmin) != n or len(bmax) != n:
            raise ValueError("increment vectors must have n bits")
        self.n = n
        self.bmin = bmin
        self.bmax = bmax

    @property
    def ones(self) -> int:
        return self.bmin.ones

    def bounds(self, m: int) -> tuple[int, int]:
        return self.bmin.rank1(m), self.bmax.rank1(m)

    def query(self, m: int, c: int) -> bool:
        if m < 1 or m > self.n or c < 0 or c > m:
            return False
        lo, hi = self.bmin.rank1(m), self.bmax.rank1(m)
        return lo <= c <= hi

    def rank_calls(self) -> int:
        return self.bmin.rank_calls + self.bmax.rank_calls

    def size_in_bits(self) -> int:
        return self.bmin.size_in_bits() + self.bmax.size_in_bits()

    def to_bytes(self) -> bytes:
        return (
            MAGIC
            + bytes([VERSION])
            + struct.pack("<Q", self.n)
            + self.bmin.to_bytes()
            + self.bmax.to_bytes()
        )

    @classmethod
    def from_bytes(cls, data, offset: int = 0) -> tuple["DetectIndex", int]:
        if bytes(data[offset : offset + 4]) != MAGIC:
            raise ValueError("not a BJPM index (bad magic)")
        if len(data) < offset + 13:
            raise ValueError("truncated BJPM header")
        if data[offset + 4] != VERSION:
            raise ValueError(f"unsupported BJPM version {data[offset + 4]}")
        (n,) = struct.unpack_from("<Q", data, offset + 5)
        bmin, offset = BitVector.from_bytes(data, offset + 13)
        bmax, offset = BitVector.from_bytes(data, offset)
        if len(bmin) != n or len(bmax) != n:
            raise ValueError("BJPM payload lengths disagree with header")
        return cls(n, bmin, bmax), offset

    def __eq__(self, other):
        if not isinstance(other, DetectIndex):
            return NotImplemented
        return self.n == other.n and self.bmin == other.bmin and self.bmax == other.bmax

    def __repr__(self):
        return f"DetectIndex(n={self.n}, bmin={self.bmin!s:.64}, bmax={self.bmax!s:.64})"


def encode(t: JumbledTable) -> DetectIndex:
    if not t.is_complete():
        raise InvariantError("cannot encode a table with unwritten cells")
    steps = []
    for col in (t.min_ones, t.max_ones):
        step = np.diff(col, prepend=0)
        if ((step != 0) & (step != 1)).any():
            bad = int(np.flatnonzero((step != 0) & (step != 1))[0]) + 1
            raise InvariantError(f"table step at m={bad} is not 0 or 1")
        steps.append(step.astype(np.uint8))
    return DetectIndex(t.len, BitVector(steps[0]), BitVector(steps[1]))


def decode(ix: DetectIndex) -> JumbledTable:
    return JumbledTable(ix.bmin.prefix_ranks()[1:], ix.bmax.prefix_ranks()[1:])


def query(ix: DetectIndex, m: int, c: int) -> bool:
    return ix.query(m, c)


def save(ix: DetectIndex, path) -> None:
    with open(path, "wb") as fh:
        fh.write(ix.to_bytes())


def load(path) -> DetectIndex:
    with open(path, "rb") as fh:
        data = fh.read()
    ix, end = DetectIndex.from_bytes(data)
    if end != len(data):
        raise ValueError("trailing bytes after BJPM index")
    return ix
