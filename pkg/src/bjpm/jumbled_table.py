"""Min/max ones per substring length, and the pieces used to assemble them.

A :class:`JumbledTable` of length ``L`` stores, for every ``m`` in ``1..L``,
the fewest and the most ones found in a length-``m`` substring. Cells nobody
has written yet hold the impossible pair ``(m + 1, -1)``, which is neutral for
pointwise min/max merging.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .bitvector import BitVector, as_bits


class JumbledTable:
    __slots__ = ("min_ones", "max_ones")

    def __init__(self, min_ones, max_ones):
        self.min_ones = np.asarray(min_ones, dtype=np.int64)
        self.max_ones = np.asarray(max_ones, dtype=np.int64)
        if self.min_ones.shape != self.max_ones.shape or self.min_ones.ndim != 1:
            raise ValueError("min/max columns must be 1-D and equally long")

    @classmethod
    def empty(cls, length: int) -> "JumbledTable":
        m = np.arange(1, length + 1, dtype=np.int64)
        return cls(m + 1, np.full(length, -1, dtype=np.int64))

    @property
    def len(self) -> int:
        return int(self.min_ones.size)

    def __len__(self):
        return self.len

    def min(self, m: int) -> int:
        return int(self.min_ones[m - 1])

    def max(self, m: int) -> int:
        return int(self.max_ones[m - 1])

    def valid_mask(self) -> np.ndarray:
        return self.max_ones >= 0

    def is_complete(self) -> bool:
        return bool(self.valid_mask().all())

    def copy(self) -> "JumbledTable":
        return JumbledTable(self.min_ones.copy(), self.max_ones.copy())

    def check(self, total_ones: int | None = None) -> None:
        """Raise ``AssertionError`` unless this is a well-formed full-string table."""
        m = np.arange(1, self.len + 1)
        assert self.is_complete(), "table has unwritten cells"
        assert (self.min_ones >= 0).all() and (self.min_ones <= self.max_ones).all()
        assert (self.max_ones <= m).all()
        for col in (self.min_ones, self.max_ones):
            steps = np.diff(col, prepend=0)
            assert ((steps == 0) | (steps == 1)).all(), "non-unit step"
        if total_ones is not None and self.len:
            assert self.min_ones[-1] == self.max_ones[-1] == total_ones

    def __eq__(self, other):
        if not isinstance(other, JumbledTable):
            return NotImplemented
        return np.array_equal(self.min_ones, other.min_ones) and np.array_equal(
            self.max_ones, other.max_ones
        )

    def __repr__(self):
        return f"JumbledTable(min={self.min_ones.tolist()}, max={self.max_ones.tolist()})"


@dataclass(frozen=True)
class SpanTable:
    """A table viewed with lengths shifted by ``delta_m`` and counts by ``delta_c``.

    Nothing is copied; only the base cells that hold values take part.
    """

    base: JumbledTable
    delta_m: int
    delta_c: int

    @property
    def lo(self) -> int:
        valid = np.flatnonzero(self.base.valid_mask())
        return self.delta_m + int(valid[0]) + 1 if valid.size else self.delta_m + 1

    @property
    def hi(self) -> int:
        return self.delta_m + self.base.len

    def min(self, m: int) -> int:
        return self.base.min(m - self.delta_m) + self.delta_c

    def max(self, m: int) -> int:
        return self.base.max(m - self.delta_m) + self.delta_c

    def entries(self) -> dict[int, tuple[int, int]]:
        """Effective ``{m: (min, max)}`` over the valid cells."""
        out = {}
        for k in np.flatnonzero(self.base.valid_mask()):
            out[int(k) + 1 + self.delta_m] = (
                int(self.base.min_ones[k]) + self.delta_c,
                int(self.base.max_ones[k]) + self.delta_c,
            )
        return out


@njit(cache=True)
def _scan_kernel(ranks, lo, hi, out_min, out_max):
    # substrings of ranks-space [lo, hi): ones(i, m) = ranks[i + m] - ranks[i]
    length = hi - lo
    for m in range(1, length + 1):
        mn = m + 1
        mx = -1
        for i in range(lo, hi - m + 1):
            c = ranks[i + m] - ranks[i]
            if c < mn:
                mn = c
            if c > mx:
                mx = c
        out_min[m - 1] = mn
        out_max[m - 1] = mx


@njit(cache=True)
def _cross_kernel(left, la, right, lb, out_min, out_max, off):
    # out[off + m - 2] for m in 2..la+lb: substrings = suffix(left, a) + prefix(right, m - a)
    suf = np.zeros(la + 1, dtype=np.int64)
    for a in range(1, la + 1):
        suf[a] = suf[a - 1] + left[la - a]
    pre = np.zeros(lb + 1, dtype=np.int64)
    for k in range(1, lb + 1):
        pre[k] = pre[k - 1] + right[k - 1]
    for m in range(2, la + lb + 1):
        a_lo = max(1, m - lb)
        a_hi = min(la, m - 1)
        mn = m + 1
        mx = -1
        for a in range(a_lo, a_hi + 1):
            c = suf[a] + pre[m - a]
            if c < mn:
                mn = c
            if c > mx:
                mx = c
        out_min[off + m - 2] = mn
        out_max[off + m - 2] = mx


def scan_work(length: int) -> int:
    """Substrings examined by the quadratic scan of a length-``length`` string."""
    return length * (length + 1) // 2


def table_from_ranks(ranks: np.ndarray, lo: int, hi: int) -> JumbledTable:
    """Scan table for the substring whose prefix ranks are ``ranks[lo..hi]`` (0-based, half-open)."""
    length = hi - lo
    mn = np.empty(length, dtype=np.int64)
    mx = np.empty(length, dtype=np.int64)
    _scan_kernel(ranks, lo, hi, mn, mx)
    return JumbledTable(mn, mx)


def build_table_scan(bits, lo: int = 1, hi: int | None = None) -> JumbledTable:
    """Quadratic table build for ``B[lo..hi]`` (1-based, inclusive).

    Every substring's ones count is the difference of two rank values. The
    rank values come from the bitvector's directory, tabulated once per call.
    """
    v = bits if isinstance(bits, BitVector) else BitVector(bits)
    if v.length == 0:
        raise ValueError("cannot build a table for the empty string")
    if hi is None:
        hi = v.length
    if not (1 <= lo <= hi <= v.length):
        raise IndexError(f"invalid range [{lo}..{hi}]")
    ranks = v.rank1_many(np.arange(lo - 1, hi + 1, dtype=np.int64))
    return table_from_ranks(ranks, 0, hi - lo + 1)


def build_cross_table(left, right) -> JumbledTable:
    """Table over ``left + right`` restricted to substrings straddling the seam.

    Cell ``m = 1`` is never straddling and keeps the neutral value.
    """
    l_arr = as_bits(left).astype(np.int64)
    r_arr = as_bits(right).astype(np.int64)
    if l_arr.size == 0 or r_arr.size == 0:
        raise ValueError("both sides of a cross table must be nonempty")
    t = JumbledTable.empty(l_arr.size + r_arr.size)
    _cross_kernel(l_arr, l_arr.size, r_arr, r_arr.size, t.min_ones[1:], t.max_ones[1:], 0)
    return t


def shift(t: JumbledTable, delta_m: int, delta_c: int) -> SpanTable:
    if delta_m < 0 or delta_c < 0:
        raise ValueError("shifts must be nonnegative")
    if delta_c > delta_m:
        raise ValueError(f"cannot add {delta_c} ones within {delta_m} extra positions")
    return SpanTable(t, int(delta_m), int(delta_c))


def merge(target: JumbledTable, source, offset: int = 0) -> JumbledTable:
    """Pointwise min/max of ``source`` into ``target`` (in place); returns ``target``.

    ``source`` is a :class:`SpanTable` or a :class:`JumbledTable` placed with
    its lengths shifted by ``offset``.
    """
    if isinstance(source, JumbledTable):
        source = SpanTable(source, int(offset), 0)
    base = source.base
    valid = base.valid_mask()
    if not valid.any():
        return target
    if source.lo < 1 or source.hi > target.len:
        raise IndexError(
            f"source lengths [{source.lo}, {source.hi}] exceed target domain [1, {target.len}]"
        )
    lo = source.delta_m
    hi = lo + base.len
    cand_min = np.where(valid, base.min_ones + source.delta_c, np.iinfo(np.int64).max)
    cand_max = np.where(valid, base.max_ones + source.delta_c, -1)
    np.minimum(target.min_ones[lo:hi], cand_min, out=target.min_ones[lo:hi])
    np.maximum(target.max_ones[lo:hi], cand_max, out=target.max_ones[lo:hi])
    return target
