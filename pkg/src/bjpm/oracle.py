"""Brute-force ground truth for tables, detection and listing.

Nothing here uses rank structures or the production table code: tables come
from a start-major double loop with a running count, listings from direct
window sums.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .bitvector import as_bits
from .jumbled_table import JumbledTable

MAX_ORACLE_LEN = 1 << 14


@njit(cache=True)
def _enumerate(bits, lo, hi):
    n = bits.size
    for start in range(n):
        ones = 0
        for end in range(start, n):
            ones += bits[end]
            m = end - start + 1
            if ones < lo[m - 1]:
                lo[m - 1] = ones
            if ones > hi[m - 1]:
                hi[m - 1] = ones


def _checked(bits) -> np.ndarray:
    arr = as_bits(bits)
    if arr.size > MAX_ORACLE_LEN:
        raise ValueError(f"oracle input longer than {MAX_ORACLE_LEN}")
    return arr


def oracle_table(bits) -> JumbledTable:
    arr = _checked(bits)
    if arr.size == 0:
        raise ValueError("oracle table of the empty string")
    n = arr.size
    lo = np.arange(2, n + 2, dtype=np.int64)
    hi = np.full(n, -1, dtype=np.int64)
    _enumerate(arr.astype(np.int64), lo, hi)
    return JumbledTable(lo, hi)


def oracle_list(bits, m: int, c: int) -> list[int]:
    arr = _checked(bits)
    if m < 1 or m > arr.size:
        return []
    sums = np.convolve(arr.astype(np.int64), np.ones(m, dtype=np.int64), mode="valid")
    return (np.flatnonzero(sums == c) + 1).tolist()


def oracle_detect(bits, m: int, c: int) -> bool:
    return bool(oracle_list(bits, m, c))


def oracle_parikh_set(bits) -> set[tuple[int, int]]:
    """Every (length, ones) pair realized by some substring."""
    arr = _checked(bits).tolist()
    out = set()
    for start in range(len(arr)):
        ones = 0
        for end in range(start, len(arr)):
            ones += arr[end]
            out.add((end - start + 1, ones))
    return out
