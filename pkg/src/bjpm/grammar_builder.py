"""Table construction from a grammar's block decomposition.

Every substring of ``B`` starts in some block ``i`` and ends in some block
``j >= i``. For ``j == i`` the distinct block's own table applies, for
``j == i + 1`` the cross table of the two distinct blocks, and for larger
``j`` the same cross table with the blocks in between added to both length
and ones count. Tables are computed once per distinct block and once per
ordered pair of distinct blocks that actually occurs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from numba import njit, typed, types

from .jumbled_table import JumbledTable, _cross_kernel, _scan_kernel
from .slp import Slp, decompose

DENSE_PAIR_LIMIT = 2048  # distinct blocks up to this use a d x d pair map


@dataclass
class BuildReport:
    ell: int
    b: int
    d: int
    work_counter: int
    wall_time: float
    g: int = 0
    block_tables: int = 0
    pair_tables: int = 0
    method: str = "grammar"


def choose_ell(n: int, g: int) -> int:
    """Block length cap ``round((n / g) ** (2/3))`` clamped to [1, n]; halves round up."""
    if n < 1 or g < 1:
        raise ValueError("n and g must be positive")
    ell = math.floor((n / g) ** (2.0 / 3.0) + 0.5)
    return max(1, min(n, ell))


@njit(cache=True)
def _span_tables(occ, blk, blk_len, prefix_len, prefix_ones, n, dense):
    d = blk_len.size
    b = occ.size
    tmin = np.empty(n + 1, dtype=np.int64)
    tmax = np.full(n + 1, -1, dtype=np.int64)
    for m in range(n + 1):
        tmin[m] = m + 1
    work = 0

    # one table per distinct block
    width = blk.shape[1]
    bmin = np.empty((d, width), dtype=np.int64)
    bmax = np.empty((d, width), dtype=np.int64)
    ranks = np.zeros(width + 1, dtype=np.int64)
    for p in range(d):
        L = blk_len[p]
        for k in range(L):
            ranks[k + 1] = ranks[k] + blk[p, k]
        _scan_kernel(ranks, 0, L, bmin[p], bmax[p])
        work += L * (L + 1) // 2

    # spans with j == i
    for i in range(b):
        p = occ[i]
        for k in range(blk_len[p]):
            m = k + 1
            if bmin[p, k] < tmin[m]:
                tmin[m] = bmin[p, k]
            if bmax[p, k] > tmax[m]:
                tmax[m] = bmax[p, k]
        work += blk_len[p]

    # cross tables, built lazily per ordered pair of distinct blocks
    if dense:
        pmap = np.full((d, d), -1, dtype=np.int32)
    else:
        pmap = np.full((1, 1), -1, dtype=np.int32)
    pdict = typed.Dict.empty(key_type=types.int64, value_type=types.int64)
    cap = 1024
    pool_min = np.empty(cap, dtype=np.int64)
    pool_max = np.empty(cap, dtype=np.int64)
    pool_off = np.empty(16, dtype=np.int64)
    used = 0
    pairs = 0
    left = np.empty(width, dtype=np.int64)
    right = np.empty(width, dtype=np.int64)

    for gap in range(1, b):
        for i in range(b - gap):
            j = i + gap
            p = occ[i]
            q = occ[j]
            idx = -1
            if dense:
                idx = pmap[p, q]
            elif p * d + q in pdict:
                idx = pdict[p * d + q]
            la = blk_len[p]
            lb = blk_len[q]
            ln = la + lb - 1
            if idx < 0:
                if used + ln > cap:
                    while used + ln > cap:
                        cap *= 2
                    grown = np.empty(cap, dtype=np.int64)
                    grown[:used] = pool_min[:used]
                    pool_min = grown
                    grown = np.empty(cap, dtype=np.int64)
                    grown[:used] = pool_max[:used]
                    pool_max = grown
                if pairs == pool_off.size:
                    grown = np.empty(pool_off.size * 2, dtype=np.int64)
                    grown[:pairs] = pool_off
                    pool_off = grown
                for k in range(la):
                    left[k] = blk[p, k]
                for k in range(lb):
                    right[k] = blk[q, k]
                _cross_kernel(left, la, right, lb, pool_min, pool_max, used)
                work += la * lb
                idx = pairs
                pool_off[idx] = used
                used += ln
                pairs += 1
                if dense:
                    pmap[p, q] = idx
                else:
                    pdict[p * d + q] = idx
            off = pool_off[idx]
            dm = prefix_len[j] - prefix_len[i + 1]
            dc = prefix_ones[j] - prefix_ones[i + 1]
            for k in range(ln):
                m = k + 2 + dm
                v = pool_min[off + k] + dc
                if v < tmin[m]:
                    tmin[m] = v
                v = pool_max[off + k] + dc
                if v > tmax[m]:
                    tmax[m] = v
            work += ln
    return tmin[1:], tmax[1:], work, pairs


def build_table_grammar(s: Slp, ell: int | None = None) -> tuple[JumbledTable, BuildReport]:
    """Build the table of ``expand(s)`` from the block decomposition of ``s``."""
    t0 = time.perf_counter()
    n = s.n
    if ell is None:
        ell = choose_ell(n, s.g)
    dec = decompose(s, ell)
    d = dec.d
    blk_len = np.array([len(x) for x in dec.distinct_blocks], dtype=np.int64)
    blk = np.zeros((d, int(blk_len.max())), dtype=np.int64)
    for p, x in enumerate(dec.distinct_blocks):
        blk[p, : x.size] = x
    tmin, tmax, work, pairs = _span_tables(
        dec.occurrence_seq,
        blk,
        blk_len,
        dec.prefix_len,
        dec.prefix_ones,
        n,
        d <= DENSE_PAIR_LIMIT,
    )
    table = JumbledTable(tmin, tmax)
    report = BuildReport(
        ell=ell,
        b=dec.b,
        d=d,
        work_counter=int(work),
        wall_time=time.perf_counter() - t0,
        g=s.g,
        block_tables=d,
        pair_tables=int(pairs),
    )
    return table, report
