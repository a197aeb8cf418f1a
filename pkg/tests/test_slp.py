import numpy as np
import pytest

from bjpm.bitvector import bits_to_str
from bjpm.slp import (
    SlpParseError,
    Slp,
    build_slp,
    decompose,
    expand,
    expand_str,
    format_slp,
    parse_slp,
    restrict,
)

from helpers import random_bits


def slp_text(compact):
    return compact.replace(" / ", "\n")


def test_parse_two_terminals():
    s = parse_slp(slp_text("SLP 3 2 / 0:0 / 1:1 / 2:0 1"))
    assert expand_str(s) == "01"
    assert s.g == 3 and s.n == 2 and s.ones == 1


def test_parse_g5(g5):
    assert expand_str(g5) == "01010101"
    assert g5.exp_len.tolist() == [1, 1, 2, 4, 8]
    assert g5.exp_ones.tolist() == [0, 1, 1, 2, 4]


def test_single_terminal():
    assert expand_str(parse_slp("SLP 1 0\n0:1\n")) == "1"


def test_parse_whitespace_and_comments():
    text = "# grammar\n\nSLP 3 2\n  0 : 0\n1:1\n# pair\n2:  0   1  \n"
    assert expand_str(parse_slp(text)) == "01"


@pytest.mark.parametrize(
    "text, line",
    [
        ("SLP 2 1 / 0:0 / 1:0 2", 3),  # forward reference
        ("SLP 2 1 / 0:0 / 1:0 -1", 3),  # unknown reference
        ("SLP 2 1 / 0:2 / 1:0 0", 2),  # non-binary terminal
        ("SLP 3 2 / 0:0 / 1:1", 1),  # too few rules
        ("SLP 1 0 / 0:0 / 1:0 0", 3),  # too many rules
        ("SLP 0 0", 1),  # empty grammar
        ("SLP 2 0 / 0:0 / 2:0 0", 3),  # id out of sequence
        ("GRAMMAR 1 0 / 0:0", 1),
    ],
)
def test_parse_errors_name_line(text, line):
    with pytest.raises(SlpParseError) as err:
        parse_slp(slp_text(text))
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_parse_empty_text():
    with pytest.raises(SlpParseError):
        parse_slp("# nothing\n")


def test_format_roundtrip(g5):
    again = parse_slp(format_slp(g5))
    assert again.rules() == g5.rules() and again.root == g5.root


def test_metadata_consistency(rng):
    for n in (1, 7, 300):
        s = build_slp(random_bits(rng, n))
        assert s.check_metadata()
        for i, rule in enumerate(s.rules()):
            if len(rule) == 2:
                assert rule[0] < i and rule[1] < i


def test_build_slp_single_bit():
    s = build_slp("0")
    assert s.g == 1 and expand_str(s) == "0"


def test_build_slp_empty():
    with pytest.raises(ValueError):
        build_slp("")


def test_build_slp_roundtrip(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 1025))
        bits = random_bits(rng, n)
        s = build_slp(bits)
        assert np.array_equal(expand(s), bits)
        assert s.g <= 2 * n


def test_build_slp_repetitive():
    s = build_slp("01" * 1024)
    assert expand_str(s) == "01" * 1024
    assert s.g <= 64


def test_decompose_whole_string(g5):
    dec = decompose(g5, 8)
    assert dec.b == 1 and dec.d == 1
    assert bits_to_str(dec.distinct_blocks[0]) == "01010101"


def test_decompose_g5_ell2(g5):
    dec = decompose(g5, 2)
    assert dec.block_rules.tolist() == [2, 2, 2, 2]
    assert dec.occurrence_seq.tolist() == [0, 0, 0, 0]
    assert [bits_to_str(x) for x in dec.distinct_blocks] == ["01"]


def test_decompose_unit_blocks(rng):
    bits = random_bits(rng, 200)
    dec = decompose(build_slp(bits), 1)
    assert dec.b == 200
    assert {bits_to_str(x) for x in dec.distinct_blocks} <= {"0", "1"}


def test_decompose_invalid_ell(g5):
    with pytest.raises(ValueError):
        decompose(g5, 0)


def test_decompose_covers_and_cumulative(rng):
    for n in (1, 2, 10, 257, 2000):
        for family in ("random", "periodic"):
            bits = random_bits(rng, n) if family == "random" else np.resize([0, 1, 1], n)
            s = build_slp(bits)
            for ell in (1, 2, 3, 7, 64, n):
                dec = decompose(s, ell)
                blocks = list(dec.blocks())
                assert np.array_equal(np.concatenate(blocks), expand(s))
                assert all(1 <= len(x) <= ell for x in dec.distinct_blocks)
                assert dec.d <= s.g + 1
                for _ in range(20):
                    i, j = sorted(rng.integers(0, dec.b, 2).tolist())
                    piece = np.concatenate(blocks[i : j + 1])
                    assert dec.span(i, j) == (piece.size, int(piece.sum()))


def test_restrict_identity(g5):
    assert expand_str(restrict(g5, 1, 8)) == "01010101"


def test_restrict_g5_example(g5):
    assert expand_str(restrict(g5, 2, 5)) == "1010"


def test_restrict_single_position(g5):
    text = expand_str(g5)
    for k in range(1, 9):
        assert expand_str(restrict(g5, k, k)) == text[k - 1]


def test_restrict_invalid(g5):
    for a, b in ((0, 3), (3, 2), (1, 9)):
        with pytest.raises(IndexError):
            restrict(g5, a, b)


def test_restrict_random(rng):
    for bits in (random_bits(rng, 3000), np.resize([0, 1, 1, 0, 1, 0, 0, 1], 4096)):
        s = build_slp(bits)
        h = s.height()
        for _ in range(200):
            a, b = sorted(rng.integers(1, bits.size + 1, 2).tolist())
            r = restrict(s, a, b)
            assert np.array_equal(expand(r), bits[a - 1 : b])
            assert r.g <= s.g + 2 * h + 1


def test_from_rules_validation():
    with pytest.raises(ValueError):
        Slp.from_rules([(0,), (1, 1)], 1)
    with pytest.raises(ValueError):
        Slp.from_rules([], 0)
