"""Command-line interface.

Exit codes: 0 success (a query with no match still succeeds), 2 usage or
input-format errors, 3 internal invariant violations.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import detect_index, listing_index
from .bitvector import BitVector
from .corpus import FAMILIES, family_word
from .detect_index import InvariantError, encode
from .grammar_builder import build_table_grammar, choose_ell
from .jumbled_table import build_table_scan, scan_work
from .oracle import oracle_list, oracle_table
from .slp import SlpParseError, build_slp, decompose, expand, parse_slp

EXIT_USAGE = 2
EXIT_INVARIANT = 3


class UsageError(Exception):
    pass


def h0(n: int, ones: int) -> float:
    """Zeroth-order empirical entropy of a binary string with ``ones`` ones."""
    total = 0.0
    for k in (n - ones, ones):
        if k:
            total += (k / n) * math.log2(n / k)
    return total


def read_text_bits(path) -> np.ndarray:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    data = bytes(raw.translate(None, b" \t\r\n\v\f"))
    if not data:
        raise UsageError(f"{path}: empty input")
    bad = data.translate(None, b"01")
    if bad:
        raise UsageError(f"{path}: unexpected byte {bad[:1]!r}; only '0' and '1' allowed")
    return np.frombuffer(data, dtype=np.uint8) - ord("0")


def read_slp(path):
    try:
        text = Path(path).read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        return parse_slp(text)
    except SlpParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def load_input(args):
    """(bits, slp or None) from ``--text`` / ``--slp``."""
    if args.slp:
        s = read_slp(args.slp)
        return expand(s), s
    bits = read_text_bits(args.text)
    s = build_slp(bits) if args.compress or args.method == "grammar" else None
    return bits, s


def build_index(bits, s, method: str):
    if method == "auto":
        method = "grammar" if s is not None else "scan"
    if method == "grammar":
        if s is None:
            s = build_slp(bits)
        table, report = build_table_grammar(s)
        stats = {
            "g": s.g,
            "ell": report.ell,
            "b": report.b,
            "d": report.d,
            "work_counter": report.work_counter,
        }
        wall = report.wall_time
    else:
        t0 = time.perf_counter()
        table = build_table_scan(BitVector(bits))
        wall = time.perf_counter() - t0
        stats = {"work_counter": scan_work(len(bits))}
        if s is not None:
            stats = {"g": s.g, **stats}
    table.check(int(np.sum(bits)))
    ix = encode(table)
    return ix, method, stats, wall


def stats_lines(bits, ix, method, stats, wall, listing=None) -> list[str]:
    n = len(bits)
    ones = int(np.sum(bits))
    out = {
        "n": n,
        "ones": ones,
        "h0": f"{h0(n, ones):.6f}",
        "method": method,
        **stats,
        "index_bits": ix.size_in_bits(),
        "payload_bits": 2 * n,
    }
    if listing is not None:
        out["listing_bits"] = listing.size_in_bits()
    out["wall_time"] = f"{wall:.6f}"
    return [f"{k}={v}" for k, v in out.items()]


def cmd_build(args) -> int:
    bits, s = load_input(args)
    try:
        ix, method, stats, wall = build_index(bits, s, args.method)
    except (InvariantError, AssertionError) as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    detect_index.save(ix, args.out)
    listing = None
    if args.listing:
        listing = listing_index.build_listing(bits, s)
        listing_index.save(listing, listing_path(args))
    for line in stats_lines(bits, ix, method, stats, wall, listing):
        print(line)
    return 0


def listing_path(args) -> Path:
    if args.listing_out:
        return Path(args.listing_out)
    return Path(args.out).with_suffix(".bjpl")


def cmd_stats(args) -> int:
    bits, s = load_input(args)
    try:
        ix, method, stats, wall = build_index(bits, s, args.method)
    except (InvariantError, AssertionError) as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    listing = listing_index.build_listing(bits, s) if args.listing else None
    for line in stats_lines(bits, ix, method, stats, wall, listing):
        print(line)
    return 0


def _load(loader, path):
    try:
        return loader(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_query(args) -> int:
    ix = _load(detect_index.load, args.index)
    print(1 if ix.query(args.m, args.c) else 0)
    return 0


def cmd_list(args) -> int:
    ix = _load(listing_index.load, args.index)
    sys.stdout.write("".join(f"{hit.start}\n" for hit in ix.list(args.m, args.c)))
    return 0


def parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad size list {text!r}") from None
    if not sizes or any(n < 1 for n in sizes) or sizes != sorted(sizes):
        raise UsageError("sizes must be positive and ascending")
    return sizes


def bench_rows(family: str, sizes, methods, seed: int = 0):
    """One dict per (n, method): family,n,g,ell,b,d,method,work_counter,seconds."""
    rng = np.random.default_rng(seed)
    for n in sizes:
        bits = family_word(family, n, rng)
        s = build_slp(bits)
        ell = choose_ell(n, s.g)
        dec = decompose(s, ell)
        for method in methods:
            if method == "grammar":
                _, rep = build_table_grammar(s, ell)
                work, secs = rep.work_counter, rep.wall_time
            else:
                t0 = time.perf_counter()
                build_table_scan(BitVector(bits))
                work, secs = scan_work(n), time.perf_counter() - t0
            yield {
                "family": family,
                "n": n,
                "g": s.g,
                "ell": ell,
                "b": dec.b,
                "d": dec.d,
                "method": method,
                "work_counter": work,
                "seconds": f"{secs:.6f}",
            }


BENCH_COLUMNS = ["family", "n", "g", "ell", "b", "d", "method", "work_counter", "seconds"]


def cmd_bench(args) -> int:
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}")
    sizes = parse_sizes(args.sizes)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in ("scan", "grammar"):
            raise UsageError(f"unknown method {m!r}")
    writer = csv.DictWriter(sys.stdout, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in bench_rows(args.family, sizes, methods, args.seed):
        writer.writerow(row)
        sys.stdout.flush()
    return 0


def cmd_oracle(args) -> int:
    bits = read_text_bits(args.text)
    if args.what == "table":
        t = oracle_table(bits)
        print("min=" + ",".join(map(str, t.min_ones.tolist())))
        print("max=" + ",".join(map(str, t.max_ones.tolist())))
    else:
        if args.m is None or args.c is None:
            raise UsageError("oracle detect/list need m and c")
        hits = oracle_list(bits, args.m, args.c)
        if args.what == "detect":
            print(1 if hits else 0)
        else:
            sys.stdout.write("".join(f"{p}\n" for p in hits))
    return 0


def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text", help="file of ASCII '0'/'1' characters (whitespace ignored)")
    src.add_argument("--slp", help="straight-line program in SLP text format")
    p.add_argument("--method", choices=("scan", "grammar", "auto"), default="auto")
    p.add_argument("--compress", action="store_true", help="build an SLP from --text input")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bjpm", description="Binary jumbled pattern matching indexes."
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("build", help="build a detection index (and optionally a listing index)")
    _add_input(p)
    p.add_argument("--out", required=True, help="BJPM output path")
    p.add_argument("--listing", action="store_true", help="also write a BJPL listing index")
    p.add_argument("--listing-out", help="BJPL path (default: --out with .bjpl suffix)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser(
        "query",
        help="print 1 if some length-M substring has exactly C ones, else 0 "
        "(out-of-range M or C prints 0)",
    )
    p.add_argument("index")
    p.add_argument("m", type=int)
    p.add_argument("c", type=int)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("list", help="print the 1-based start of every match, one per line")
    p.add_argument("index")
    p.add_argument("m", type=int)
    p.add_argument("c", type=int)
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("stats", help="build in memory and print statistics")
    _add_input(p)
    p.add_argument("--listing", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="CSV of build work on a generated family")
    p.add_argument("--family", required=True, help="random, fib or power")
    p.add_argument("--sizes", required=True, help="comma-separated ascending lengths")
    p.add_argument("--methods", default="scan,grammar")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle", help=argparse.SUPPRESS)
    p.add_argument("what", choices=("table", "detect", "list"))
    p.add_argument("--text", required=True)
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("c", type=int, nargs="?")
    p.set_defaults(func=cmd_oracle)
    # keep the hidden command out of the usage line
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
