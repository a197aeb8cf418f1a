"""Plain bitvectors with a two-level rank directory and sampled select.

Positions are 1-based (``access(1)`` is the first bit); ``rank1(i)`` counts
the ones among the first ``i`` bits, so ``rank1(0) == 0``.
"""

from __future__ import annotations

import struct

import numpy as np

WORD_BITS = 64
WORDS_PER_SUPER = 8  # 512-bit superblocks
SELECT_SAMPLE = 256


def as_bits(bits) -> np.ndarray:
    """Coerce a '0'/'1' string, bytes, iterable or array into a uint8 0/1 array."""
    if isinstance(bits, BitVector):
        return bits.to_array()
    if isinstance(bits, (bytes, bytearray)):
        bits = bits.decode("ascii")
    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        if arr.size and arr.max(initial=0) > 1:
            raise ValueError("bit string may only contain '0' and '1'")
        return arr.astype(np.uint8)
    arr = np.asarray(bits)
    if arr.dtype == np.bool_:
        return arr.astype(np.uint8)
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise ValueError("bits must be 0 or 1")
    return arr.astype(np.uint8, copy=False).ravel()


def bits_to_str(bits) -> str:
    return (np.asarray(bits, dtype=np.uint8) + ord("0")).tobytes().decode("ascii")


class BitVector:
    """Immutable bit sequence supporting ``rank1``, ``select1`` and ``access``.

    The payload is kept as little-endian 64-bit words. The directory stores an
    absolute count per 512-bit superblock and a relative count per word, so
    ``rank1`` is two table lookups plus one popcount. ``select1`` jumps to a
    sampled superblock window and finishes with a bounded binary search.
    """

    __slots__ = ("length", "words", "_super", "_rel", "_ones", "_samples", "rank_calls")

    def __init__(self, bits=()):
        arr = as_bits(bits)
        self.length = int(arr.size)
        nwords = (self.length + WORD_BITS - 1) // WORD_BITS
        packed = np.packbits(arr, bitorder="little")
        buf = np.zeros(nwords * 8, dtype=np.uint8)
        buf[: packed.size] = packed
        self.words = buf.view("<u8").copy()
        self._build_directory()

    @classmethod
    def _from_words(cls, length: int, words: np.ndarray) -> "BitVector":
        self = cls.__new__(cls)
        self.length = int(length)
        self.words = np.ascontiguousarray(words, dtype="<u8")
        tail = self.length % WORD_BITS
        if tail and self.words.size:
            self.words[-1] &= np.uint64((1 << tail) - 1)
        self._build_directory()
        return self

    def _build_directory(self):
        counts = np.bitwise_count(self.words).astype(np.int64)
        # rank before each word, split into superblock absolute + in-superblock relative
        before = np.zeros(counts.size + 1, dtype=np.int64)
        np.cumsum(counts, out=before[1:])
        self._ones = int(before[-1])
        self._super = before[: counts.size : WORDS_PER_SUPER].copy()
        if self._super.size == 0:
            self._super = np.zeros(1, dtype=np.int64)
        idx = np.arange(counts.size) // WORDS_PER_SUPER
        self._rel = (before[:-1] - self._super[idx]).astype(np.uint16)
        # superblock holding the (k*SELECT_SAMPLE + 1)-th one, k = 0, 1, ...
        targets = np.arange(1, self._ones + 1, SELECT_SAMPLE, dtype=np.int64)
        self._samples = np.searchsorted(self._super, targets, side="left") - 1
        self._samples = np.maximum(self._samples, 0)
        self.rank_calls = 0

    def __len__(self):
        return self.length

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.words, other.words)

    def __repr__(self):
        shown = bits_to_str(self.to_array()[:64])
        more = "..." if self.length > 64 else ""
        return f"BitVector({shown}{more}, n={self.length})"

    def __str__(self):
        return bits_to_str(self.to_array())

    @property
    def ones(self) -> int:
        return self._ones

    def rank1(self, i: int) -> int:
        """Number of ones in positions 1..i."""
        if i < 0 or i > self.length:
            raise IndexError(f"rank position {i} outside [0, {self.length}]")
        self.rank_calls += 1
        w, off = divmod(i, WORD_BITS)
        if w == self.words.size:
            return self._ones
        r = int(self._super[w // WORDS_PER_SUPER]) + int(self._rel[w])
        if off:
            r += (int(self.words[w]) & ((1 << off) - 1)).bit_count()
        return r

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def access(self, i: int) -> int:
        if i < 1 or i > self.length:
            raise IndexError(f"position {i} outside [1, {self.length}]")
        w, off = divmod(i - 1, WORD_BITS)
        return (int(self.words[w]) >> off) & 1

    def __getitem__(self, i):
        return self.access(i)

    def select1(self, k: int) -> int:
        """1-based position of the k-th one."""
        if k < 1 or k > self._ones:
            raise IndexError(f"select rank {k} outside [1, {self._ones}]")
        s = (k - 1) // SELECT_SAMPLE
        lo = int(self._samples[s])
        hi = int(self._samples[s + 1]) + 1 if s + 1 < self._samples.size else self._super.size
        sb = lo + int(np.searchsorted(self._super[lo:hi], k, side="left")) - 1
        w0 = sb * WORDS_PER_SUPER
        w1 = min(w0 + WORDS_PER_SUPER, self.words.size)
        rem = k - int(self._super[sb])
        w = w0 + int(np.searchsorted(self._rel[w0:w1], rem, side="left")) - 1
        rem -= int(self._rel[w])
        word = int(self.words[w])
        for _ in range(rem - 1):
            word &= word - 1
        return w * WORD_BITS + ((word & -word).bit_length())

    def rank1_many(self, positions) -> np.ndarray:
        """Vectorized ``rank1`` over an array of prefix lengths (not counted)."""
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size and (pos.min() < 0 or pos.max() > self.length):
            raise IndexError("rank position out of range")
        w = pos >> 6
        off = (pos & 63).astype(np.uint64)
        inside = w < self.words.size
        wc = np.where(inside, w, 0)
        if self.words.size == 0:
            return np.zeros(pos.shape, dtype=np.int64)
        base = self._super[wc // WORDS_PER_SUPER] + self._rel[wc].astype(np.int64)
        mask = (np.uint64(1) << off) - np.uint64(1)
        part = np.bitwise_count(self.words[wc] & mask).astype(np.int64)
        return np.where(inside, base + part, self._ones)

    def prefix_ranks(self) -> np.ndarray:
        """``rank1(i)`` for every i in 0..n, via the directory."""
        return self.rank1_many(np.arange(self.length + 1, dtype=np.int64))

    def to_array(self) -> np.ndarray:
        raw = self.words.view(np.uint8)
        return np.unpackbits(raw, count=self.length, bitorder="little")

    def size_in_bits(self) -> int:
        """Payload plus rank/select directory size."""
        return (
            self.words.size * 64
            + self._super.size * 64
            + self._rel.size * 16
            + self._samples.size * 64
        )

    def to_bytes(self) -> bytes:
        nbytes = (self.length + 7) // 8
        return struct.pack("<Q", self.length) + self.words.view(np.uint8)[:nbytes].tobytes()

    @classmethod
    def from_bytes(cls, data, offset: int = 0) -> tuple["BitVector", int]:
        """Decode a vector starting at ``offset``; returns (vector, next offset)."""
        if len(data) - offset < 8:
            raise ValueError("truncated bitvector header")
        (length,) = struct.unpack_from("<Q", data, offset)
        offset += 8
        nbytes = (length + 7) // 8
        if len(data) - offset < nbytes:
            raise ValueError("truncated bitvector payload")
        nwords = (length + WORD_BITS - 1) // WORD_BITS
        buf = np.zeros(nwords * 8, dtype=np.uint8)
        buf[:nbytes] = np.frombuffer(data, dtype=np.uint8, count=nbytes, offset=offset)
        return cls._from_words(length, buf.view("<u8")), offset + nbytes
