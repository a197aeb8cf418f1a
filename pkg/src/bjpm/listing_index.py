"""Listing every length-m substring with exactly c ones.

Segments come in levels. Level ``t`` holds segments of length
``seg_len = n_hat >> t`` starting every ``seg_len / 2`` positions, clipped to
``[1, n]``; a clipped segment that fits inside its predecessor is dropped. Any
window of length ``m <= seg_len / 2`` lies inside one or two segments of the
level, so descending from the whole string through segments whose detection
index reports a match narrows the search to a few short segments, which are
then scanned.

For ``m < log2(n_hat)`` the descent is replaced by one precomputed bitvector
per ``(m, c)`` marking the segments to scan.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .bitvector import BitVector, as_bits
from .detect_index import DetectIndex, encode
from .grammar_builder import build_table_grammar
from .jumbled_table import table_from_ranks
from .slp import Slp, build_slp, restrict

MAGIC = b"BJPL"
VERSION = 1
SCAN_FLOOR = 64


@dataclass(frozen=True, order=True)
class Match:
    start: int
    length: int


@dataclass
class SegmentSet:
    level: int
    seg_len: int
    starts: np.ndarray
    ends: np.ndarray
    indexes: list

    def __len__(self):
        return len(self.indexes)

    def segments(self):
        return [
            (int(s), int(e), ix) for s, e, ix in zip(self.starts, self.ends, self.indexes)
        ]


def next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def level_lengths(n_hat: int) -> list[int]:
    lens = [n_hat]
    while lens[-1] // 2 >= 4:
        lens.append(lens[-1] // 2)
    return lens


def segment_bounds(n: int, n_hat: int, seg_len: int) -> list[tuple[int, int]]:
    """1-based inclusive (start, end) of the kept segments of one level."""
    if seg_len >= n_hat:
        return [(1, n)]
    half = seg_len // 2
    out = []
    for j in range(2 * n_hat // seg_len - 1):
        start = j * half + 1
        end = min(start + seg_len - 1, n)
        if start > n or (out and end <= out[-1][1]):
            break
        out.append((start, end))
    return out


@njit(cache=True)
def _window_scan(bits, lo, hi, m, c, out):
    # 0-based half-open [lo, hi); writes 1-based starts into out
    count = 0
    ones = 0
    for k in range(lo, lo + m):
        ones += bits[k]
    last = hi - m
    for p in range(lo, last + 1):
        if ones == c:
            out[count] = p + 1
            count += 1
        if p < last:
            ones += bits[p + m] - bits[p]
    return count


def scan_segment(text, lo: int, hi: int, m: int, c: int) -> list[Match]:
    """Matches starting in ``[lo, hi - m + 1]`` via a sliding window."""
    bits = text if isinstance(text, np.ndarray) else as_bits(text)
    if not (1 <= lo <= hi <= bits.size):
        raise IndexError(f"invalid interval [{lo}..{hi}] for length {bits.size}")
    if m < 1 or m > hi - lo + 1:
        raise ValueError(f"window length {m} does not fit in [{lo}..{hi}]")
    out = np.empty(hi - lo - m + 2, dtype=np.int64)
    k = _window_scan(bits, lo - 1, hi, m, c, out)
    return [Match(int(p), m) for p in out[:k]]


@dataclass
class ListingIndex:
    n: int
    n_hat: int
    text: BitVector
    sets: list
    small_m: dict
    build_info: dict = field(default_factory=dict)
    last_scanned: int = 0
    last_queries: int = 0

    def __post_init__(self):
        self._bits = self.text.to_array()

    @property
    def small_threshold(self) -> int:
        """Lengths below this use the per-(m, c) bitvectors."""
        return max(0, self.n_hat.bit_length() - 1)

    def stop_level(self, m: int):
        """Deepest level whose segments are at least ``2m`` long, or None."""
        best = None
        for t, ss in enumerate(self.sets):
            if ss.seg_len >= 2 * m:
                best = t
        return best

    def candidates(self, m: int, c: int) -> list[tuple[int, int]]:
        self.last_queries = 0
        if m < self.small_threshold:
            t = self.stop_level(m)
            ss = self.sets[t]
            bv = self.small_m[(m, c)]
            picks = [bv.select1(k) - 1 for k in range(1, bv.ones + 1)]
            return [(int(ss.starts[k]), int(ss.ends[k])) for k in picks]
        top = self.sets[0]
        self.last_queries += 1
        if not top.indexes[0].query(m, c):
            return []
        stop = self.stop_level(m)
        if stop is None:
            return [(1, self.n)]
        cand = [(1, self.n)]
        for t in range(1, stop + 1):
            ss = self.sets[t]
            picked = set()
            for ps, pe in cand:
                a = int(np.searchsorted(ss.starts, ps, side="left"))
                b = int(np.searchsorted(ss.ends, pe, side="right"))
                picked.update(range(a, b))
            cand = []
            for k in sorted(picked):
                self.last_queries += 1
                if ss.indexes[k].query(m, c):
                    cand.append((int(ss.starts[k]), int(ss.ends[k])))
            if not cand:
                break
        return cand

    def list(self, m: int, c: int) -> list[Match]:
        self.last_scanned = 0
        if m < 1 or m > self.n or c < 0 or c > m:
            self.last_queries = 0
            return []
        merged = []
        for s, e in sorted(self.candidates(m, c)):
            if merged and s <= merged[-1][1] + 1:
                if e > merged[-1][1]:
                    merged[-1][1] = e
            else:
                merged.append([s, e])
        out = []
        for s, e in merged:
            self.last_scanned += e - s + 1
            out.extend(scan_segment(self._bits, s, e, m, c))
        return out

    def size_in_bits(self) -> int:
        total = self.text.size_in_bits()
        for ss in self.sets:
            total += 128 * len(ss)
            total += sum(ix.size_in_bits() for ix in ss.indexes)
        total += sum(bv.size_in_bits() for bv in self.small_m.values())
        return total

    def to_bytes(self) -> bytes:
        parts = [
            MAGIC,
            bytes([VERSION]),
            struct.pack("<QQ", self.n, self.n_hat),
            self.text.to_bytes(),
            struct.pack("<Q", len(self.sets)),
        ]
        for ss in self.sets:
            parts.append(struct.pack("<Q", len(ss)))
            for s, e, ix in ss.segments():
                parts.append(struct.pack("<QQ", s, e))
                parts.append(ix.to_bytes())
        parts.append(struct.pack("<Q", len(self.small_m)))
        for (m, c) in sorted(self.small_m):
            parts.append(struct.pack("<QQ", m, c))
            parts.append(self.small_m[(m, c)].to_bytes())
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, data) -> "ListingIndex":
        if bytes(data[:4]) != MAGIC:
            raise ValueError("not a BJPL index (bad magic)")
        if len(data) < 5 or data[4] != VERSION:
            raise ValueError("unsupported BJPL version")
        try:
            n, n_hat = struct.unpack_from("<QQ", data, 5)
            text, off = BitVector.from_bytes(data, 21)
            (nlev,) = struct.unpack_from("<Q", data, off)
            off += 8
            sets = []
            for t in range(nlev):
                (count,) = struct.unpack_from("<Q", data, off)
                off += 8
                starts, ends, idxs = [], [], []
                for _ in range(count):
                    s, e = struct.unpack_from("<QQ", data, off)
                    ix, off = DetectIndex.from_bytes(data, off + 16)
                    starts.append(s)
                    ends.append(e)
                    idxs.append(ix)
                sets.append(
                    SegmentSet(
                        t, n_hat >> t, np.array(starts, np.int64), np.array(ends, np.int64), idxs
                    )
                )
            (nsmall,) = struct.unpack_from("<Q", data, off)
            off += 8
            small = {}
            for _ in range(nsmall):
                m, c = struct.unpack_from("<QQ", data, off)
                small[(m, c)], off = BitVector.from_bytes(data, off + 16)
        except struct.error as exc:
            raise ValueError(f"truncated BJPL index: {exc}") from None
        if off != len(data):
            raise ValueError("trailing bytes after BJPL index")
        if len(text) != n:
            raise ValueError("BJPL text length disagrees with header")
        return cls(n, n_hat, text, sets, small)


def build_listing(bits, s: Slp | None = None, scan_threshold: int | None = None) -> ListingIndex:
    """Build every segment's detection index plus the small-m bitvectors.

    Segments longer than ``scan_threshold`` (default ``max(64, g)``) get their
    table from the grammar restricted to the segment; shorter ones are scanned.
    """
    text = bits if isinstance(bits, BitVector) else BitVector(bits)
    n = text.length
    if n == 0:
        raise ValueError("cannot index the empty string")
    n_hat = next_pow2(n)
    ranks = text.prefix_ranks()
    if s is None:
        s = build_slp(text.to_array())
    elif s.n != n:
        raise ValueError("grammar length disagrees with the text")
    if scan_threshold is None:
        scan_threshold = max(SCAN_FLOOR, s.g)
    info = {"grammar_segments": 0, "scan_segments": 0, "restricted_rules": []}
    built: dict[tuple[int, int], DetectIndex] = {}

    def segment_index(start, end):
        key = (start, end)
        ix = built.get(key)
        if ix is not None:
            return ix
        if end - start + 1 > scan_threshold:
            sub = restrict(s, start, end)
            info["restricted_rules"].append(sub.g)
            info["grammar_segments"] += 1
            table, _ = build_table_grammar(sub)
        else:
            info["scan_segments"] += 1
            table = table_from_ranks(ranks, start - 1, end)
        ix = encode(table)
        built[key] = ix
        return ix

    sets = []
    for t, seg_len in enumerate(level_lengths(n_hat)):
        bounds = segment_bounds(n, n_hat, seg_len)
        sets.append(
            SegmentSet(
                t,
                seg_len,
                np.array([b[0] for b in bounds], dtype=np.int64),
                np.array([b[1] for b in bounds], dtype=np.int64),
                [segment_index(a, b) for a, b in bounds],
            )
        )

    ix = ListingIndex(n, n_hat, text, sets, {}, build_info=info)
    small = {}
    for m in range(1, ix.small_threshold):
        ss = sets[ix.stop_level(m)]
        marks = np.zeros((m + 1, len(ss)), dtype=np.uint8)
        for k, (s0, e0, seg) in enumerate(ss.segments()):
            if e0 - s0 + 1 < m:
                continue
            lo, hi = seg.bounds(m)
            marks[lo : hi + 1, k] = 1
        for c in range(m + 1):
            small[(m, c)] = BitVector(marks[c])
    ix.small_m = small
    return ix


def list_matches(ix: ListingIndex, m: int, c: int) -> list[Match]:
    return ix.list(m, c)


def save(ix: ListingIndex, path) -> None:
    with open(path, "wb") as fh:
        fh.write(ix.to_bytes())


def load(path) -> ListingIndex:
    with open(path, "rb") as fh:
        return ListingIndex.from_bytes(fh.read())
