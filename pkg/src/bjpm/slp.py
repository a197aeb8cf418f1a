"""Straight-line programs over the binary alphabet.

Rules are numbered so that children always precede parents. A terminal rule
has ``bit`` in {0, 1} and ``left == right == -1``; a pair rule has ``bit == -1``.

Text format::

    SLP <g> <root>
    0:0
    1:1
    2:0 1
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .bitvector import as_bits, bits_to_str

_SMALL_RULE = 4096  # expansions up to this length are memoized while expanding


class SlpParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True, eq=False)
class Slp:
    left: np.ndarray
    right: np.ndarray
    bit: np.ndarray
    root: int
    exp_len: np.ndarray = field(repr=False)
    exp_ones: np.ndarray = field(repr=False)

    @classmethod
    def from_rules(cls, rules, root: int) -> "Slp":
        """Build from a list of ``(bit,)`` / ``(left, right)`` tuples."""
        g = len(rules)
        if g == 0:
            raise ValueError("empty grammar")
        if not 0 <= root < g:
            raise ValueError(f"root {root} outside [0, {g})")
        left = np.full(g, -1, dtype=np.int64)
        right = np.full(g, -1, dtype=np.int64)
        bit = np.full(g, -1, dtype=np.int64)
        exp_len = np.zeros(g, dtype=np.int64)
        exp_ones = np.zeros(g, dtype=np.int64)
        for i, rule in enumerate(rules):
            if len(rule) == 1:
                b = rule[0]
                if b not in (0, 1):
                    raise ValueError(f"rule {i}: terminal must be 0 or 1")
                bit[i] = b
                exp_len[i] = 1
                exp_ones[i] = b
            else:
                l, r = rule
                if not (0 <= l < i and 0 <= r < i):
                    raise ValueError(f"rule {i}: reference must point to a smaller rule id")
                left[i], right[i] = l, r
                exp_len[i] = exp_len[l] + exp_len[r]
                exp_ones[i] = exp_ones[l] + exp_ones[r]
        return cls(left, right, bit, int(root), exp_len, exp_ones)

    @property
    def g(self) -> int:
        return int(self.left.size)

    @property
    def n(self) -> int:
        return int(self.exp_len[self.root])

    @property
    def ones(self) -> int:
        return int(self.exp_ones[self.root])

    def is_terminal(self, i: int) -> bool:
        return self.bit[i] >= 0

    def rules(self) -> list[tuple]:
        out = []
        for i in range(self.g):
            if self.bit[i] >= 0:
                out.append((int(self.bit[i]),))
            else:
                out.append((int(self.left[i]), int(self.right[i])))
        return out

    def check_metadata(self) -> bool:
        """Recompute expansion lengths/ones bottom-up and compare."""
        fresh = Slp.from_rules(self.rules(), self.root)
        return np.array_equal(fresh.exp_len, self.exp_len) and np.array_equal(
            fresh.exp_ones, self.exp_ones
        )

    def height(self) -> int:
        h = np.zeros(self.g, dtype=np.int64)
        for i in range(self.g):
            if self.bit[i] < 0:
                h[i] = 1 + max(h[self.left[i]], h[self.right[i]])
        return int(h[self.root])

    def expand_rule(self, rule: int) -> np.ndarray:
        out = np.empty(int(self.exp_len[rule]), dtype=np.uint8)
        self._expand_into(rule, out, {})
        return out

    def _expand_into(self, rule, out, cache):
        """Write the expansion of ``rule`` into ``out``, memoizing short rules in ``cache``."""
        left, right, bit, exp_len = self.left, self.right, self.bit, self.exp_len
        pos = 0
        stack = [int(rule)]
        marks = []
        while stack:
            x = stack.pop()
            if x < 0:
                x = ~x
                start = marks.pop()
                cache[x] = out[start:pos].copy()
                continue
            if bit[x] >= 0:
                out[pos] = bit[x]
                pos += 1
                continue
            ln = int(exp_len[x])
            if ln <= _SMALL_RULE:
                piece = cache.get(x)
                if piece is not None:
                    out[pos : pos + ln] = piece
                    pos += ln
                    continue
                marks.append(pos)
                stack.append(~x)
            stack.append(int(right[x]))
            stack.append(int(left[x]))


def parse_slp(text: str) -> Slp:
    header = None
    rules: list[tuple] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 3 or parts[0] != "SLP":
                raise SlpParseError("expected header 'SLP <g> <root>'", lineno)
            try:
                g, root = int(parts[1]), int(parts[2])
            except ValueError:
                raise SlpParseError("header counts must be integers", lineno) from None
            if g <= 0:
                raise SlpParseError("empty grammar", lineno)
            header = (g, root, lineno)
            continue
        rid, sep, body = line.partition(":")
        if not sep:
            raise SlpParseError("expected '<id>:<bit>' or '<id>:<left> <right>'", lineno)
        try:
            rid = int(rid)
            fields = [int(tok) for tok in body.split()]
        except ValueError:
            raise SlpParseError("rule fields must be integers", lineno) from None
        if rid != len(rules):
            raise SlpParseError(f"expected rule id {len(rules)}, got {rid}", lineno)
        if rid >= header[0]:
            raise SlpParseError(f"rule count mismatch: header declares {header[0]} rules", lineno)
        if len(fields) == 1:
            if fields[0] not in (0, 1):
                raise SlpParseError(f"non-binary terminal {fields[0]}", lineno)
            rules.append((fields[0],))
        elif len(fields) == 2:
            for ref in fields:
                if ref < 0 or ref >= rid:
                    kind = "forward" if ref >= rid else "unknown"
                    raise SlpParseError(f"{kind} rule reference {ref} in rule {rid}", lineno)
            rules.append((fields[0], fields[1]))
        else:
            raise SlpParseError("a rule has one terminal bit or two rule ids", lineno)
    if header is None:
        raise SlpParseError("empty grammar", None)
    g, root, hline = header
    if len(rules) != g:
        raise SlpParseError(f"rule count mismatch: header declares {g}, found {len(rules)}", hline)
    if not 0 <= root < g:
        raise SlpParseError(f"root {root} outside [0, {g})", hline)
    return Slp.from_rules(rules, root)


def format_slp(s: Slp) -> str:
    lines = [f"SLP {s.g} {s.root}"]
    for i, rule in enumerate(s.rules()):
        lines.append(f"{i}:" + " ".join(map(str, rule)))
    return "\n".join(lines) + "\n"


def expand(s: Slp) -> np.ndarray:
    """The string generated by ``s`` as a uint8 0/1 array."""
    return s.expand_rule(s.root)


def expand_str(s: Slp) -> str:
    return bits_to_str(expand(s))


def build_slp(bits) -> Slp:
    """Re-Pair: replace the most frequent adjacent pair until none repeats.

    The residual sequence is folded into a left-leaning chain of pair rules.
    Ties between equally frequent pairs go to the smaller (left, right) key.
    """
    arr = as_bits(bits)
    n = int(arr.size)
    if n == 0:
        raise ValueError("cannot build an SLP for the empty string")
    rules: list[tuple] = []
    term = {}
    for b in (0, 1):
        if (arr == b).any():
            term[b] = len(rules)
            rules.append((b,))
    seq = [term[int(x)] for x in arr]
    nxt = list(range(1, n)) + [-1]
    prv = list(range(-1, n - 1))

    SHIFT = 32
    MASK = (1 << SHIFT) - 1
    counts: dict[int, int] = {}
    occ: dict[int, list[int]] = {}
    heap: list[tuple[int, int]] = []

    def inc(key, pos):
        c = counts.get(key, 0) + 1
        counts[key] = c
        occ.setdefault(key, []).append(pos)
        if c >= 2:
            heapq.heappush(heap, (-c, key))

    def dec(key):
        c = counts.get(key, 0) - 1
        if c > 0:
            counts[key] = c
        else:
            counts.pop(key, None)

    for i in range(n - 1):
        inc((seq[i] << SHIFT) | seq[i + 1], i)

    while heap:
        negc, key = heapq.heappop(heap)
        c = -negc
        if c < 2:
            break
        cur = counts.get(key, 0)
        if cur != c:
            if cur >= 2:
                heapq.heappush(heap, (-cur, key))
            continue
        a, b = key >> SHIFT, key & MASK
        valid = []
        last_j = -1
        for i in sorted(occ.pop(key, ())):
            if seq[i] != a or i == last_j:
                continue
            j = nxt[i]
            if j < 0 or seq[j] != b:
                continue
            valid.append(i)
            last_j = j
        if len(valid) < 2:
            counts[key] = len(valid)
            if valid:
                occ[key] = valid
            else:
                counts.pop(key, None)
            continue
        x = len(rules)
        rules.append((a, b))
        for i in valid:
            j = nxt[i]
            h = prv[i]
            k = nxt[j]
            if h >= 0:
                dec((seq[h] << SHIFT) | a)
            if k >= 0:
                dec((b << SHIFT) | seq[k])
            seq[i] = x
            seq[j] = -1
            nxt[i] = k
            if k >= 0:
                prv[k] = i
            if h >= 0:
                inc((seq[h] << SHIFT) | x, h)
            if k >= 0:
                inc((x << SHIFT) | seq[k], i)
        counts.pop(key, None)

    residual = []
    i = 0
    while i >= 0:
        residual.append(seq[i])
        i = nxt[i]
    acc = residual[0]
    for sym in residual[1:]:
        rules.append((acc, sym))
        acc = len(rules) - 1
    return Slp.from_rules(rules, acc)


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """``B`` as a sequence of block occurrences over a dictionary of distinct blocks.

    ``prefix_len[k]`` / ``prefix_ones[k]`` give the length and ones count of
    the first ``k`` blocks, so blocks i..j (0-based, inclusive) span
    ``prefix_len[j + 1] - prefix_len[i]`` bits.
    """

    distinct_blocks: list
    occurrence_seq: np.ndarray
    block_len_cap: int
    prefix_len: np.ndarray
    prefix_ones: np.ndarray
    block_rules: np.ndarray

    @property
    def b(self) -> int:
        return int(self.occurrence_seq.size)

    @property
    def d(self) -> int:
        return len(self.distinct_blocks)

    def blocks(self):
        for k in self.occurrence_seq:
            yield self.distinct_blocks[k]

    def span(self, i: int, j: int) -> tuple[int, int]:
        """(length, ones) of blocks i..j, 0-based inclusive; empty when j < i."""
        if j < i:
            return 0, 0
        return (
            int(self.prefix_len[j + 1] - self.prefix_len[i]),
            int(self.prefix_ones[j + 1] - self.prefix_ones[i]),
        )


def decompose(s: Slp, ell: int) -> BlockDecomposition:
    """Cut the derivation tree at the topmost nodes whose expansion fits in ``ell``.

    Distinct blocks are identified by content, so two rules with equal
    expansions share one dictionary entry.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    exp_len, left, right = s.exp_len, s.left, s.right
    cut = []
    stack = [s.root]
    while stack:
        x = stack.pop()
        if exp_len[x] <= ell:
            cut.append(x)
        else:
            stack.append(int(right[x]))
            stack.append(int(left[x]))
    block_rules = np.asarray(cut, dtype=np.int64)

    rule_to_block: dict[int, int] = {}
    content_to_block: dict[bytes, int] = {}
    distinct = []
    cache: dict = {}
    occ = np.empty(block_rules.size, dtype=np.int64)
    for k, x in enumerate(cut):
        idx = rule_to_block.get(x)
        if idx is None:
            piece = np.empty(int(exp_len[x]), dtype=np.uint8)
            s._expand_into(x, piece, cache)
            key = piece.tobytes()
            idx = content_to_block.get(key)
            if idx is None:
                idx = len(distinct)
                content_to_block[key] = idx
                distinct.append(piece)
            rule_to_block[x] = idx
        occ[k] = idx

    lens = s.exp_len[block_rules]
    ones = s.exp_ones[block_rules]
    prefix_len = np.zeros(block_rules.size + 1, dtype=np.int64)
    prefix_ones = np.zeros(block_rules.size + 1, dtype=np.int64)
    np.cumsum(lens, out=prefix_len[1:])
    np.cumsum(ones, out=prefix_ones[1:])
    return BlockDecomposition(distinct, occ, int(ell), prefix_len, prefix_ones, block_rules)


def _prune(rules: list[tuple], root: int) -> Slp:
    """Keep only rules reachable from ``root``, preserving order."""
    seen = [False] * len(rules)
    stack = [root]
    seen[root] = True
    while stack:
        x = stack.pop()
        if len(rules[x]) == 2:
            for c in rules[x]:
                if not seen[c]:
                    seen[c] = True
                    stack.append(c)
    remap = {}
    kept = []
    for i, rule in enumerate(rules):
        if not seen[i]:
            continue
        remap[i] = len(kept)
        kept.append(rule if len(rule) == 1 else (remap[rule[0]], remap[rule[1]]))
    return Slp.from_rules(kept, remap[root])


def restrict(s: Slp, a: int, b: int) -> Slp:
    """An SLP for ``B[a..b]`` (1-based, inclusive).

    Original rules that lie fully inside the range are reused; new pair rules
    are created only along the two root-to-leaf paths bounding the range.
    Unreachable rules are dropped from the result.
    """
    n = s.n
    if not (1 <= a <= b <= n):
        raise IndexError(f"invalid range [{a}..{b}] for string of length {n}")
    rules = s.rules()
    exp_len, left, right = s.exp_len, s.left, s.right

    def new_pair(l, r):
        rules.append((l, r))
        return len(rules) - 1

    def suffix(x, k):
        path = []
        while exp_len[x] > k:
            rl = int(exp_len[right[x]])
            if k <= rl:
                x = int(right[x])
            else:
                path.append(int(right[x]))
                k -= rl
                x = int(left[x])
        for r in reversed(path):
            x = new_pair(x, r)
        return x

    def prefix(x, k):
        path = []
        while exp_len[x] > k:
            ll = int(exp_len[left[x]])
            if k <= ll:
                x = int(left[x])
            else:
                path.append(int(left[x]))
                k -= ll
                x = int(right[x])
        for l in reversed(path):
            x = new_pair(l, x)
        return x

    lo, hi = a - 1, b
    x = s.root
    while True:
        if lo == 0 and hi == exp_len[x]:
            root = x
            break
        ll = int(exp_len[left[x]])
        if hi <= ll:
            x = int(left[x])
        elif lo >= ll:
            x = int(right[x])
            lo -= ll
            hi -= ll
        else:
            root = new_pair(suffix(int(left[x]), ll - lo), prefix(int(right[x]), hi - ll))
            break
    return _prune(rules, root)
