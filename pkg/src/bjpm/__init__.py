"""Detection and listing indexes for binary jumbled pattern matching."""

from .bitvector import BitVector
from .detect_index import DetectIndex, InvariantError, decode, encode, query
from .grammar_builder import BuildReport, build_table_grammar, choose_ell
from .jumbled_table import (
    JumbledTable,
    SpanTable,
    build_cross_table,
    build_table_scan,
    merge,
    shift,
)
from .listing_index import ListingIndex, Match, build_listing, list_matches, scan_segment
from .oracle import oracle_detect, oracle_list, oracle_table
from .slp import (
    BlockDecomposition,
    Slp,
    SlpParseError,
    build_slp,
    decompose,
    expand,
    parse_slp,
    restrict,
)

__version__ = "0.1.0"
