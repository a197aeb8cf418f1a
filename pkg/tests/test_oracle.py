import pytest

from bjpm.oracle import (
    MAX_ORACLE_LEN,
    oracle_detect,
    oracle_list,
    oracle_parikh_set,
    oracle_table,
)

from helpers import all_strings


@pytest.mark.parametrize(
    "bits, mins, maxs",
    [("0", [0], [0]), ("0110", [0, 1, 2, 2], [1, 2, 2, 2]), ("1111", [1, 2, 3, 4], [1, 2, 3, 4])],
)
def test_oracle_table_examples(bits, mins, maxs):
    t = oracle_table(bits)
    assert t.min_ones.tolist() == mins and t.max_ones.tolist() == maxs


def test_oracle_detect_examples():
    assert oracle_detect("0110", 3, 1) is False
    assert oracle_detect("0110", 2, 2) is True
    assert oracle_detect("0110", 0, 0) is False
    assert oracle_detect("0110", 5, 2) is False


def test_oracle_list_examples():
    assert oracle_list("0110", 2, 1) == [1, 3]
    assert oracle_list("0000", 1, 1) == []
    assert oracle_list("0110", 4, 2) == [1]


def test_oracle_table_invariants():
    for bits in all_strings(10):
        oracle_table(bits).check(int(bits.sum()))


def test_oracles_agree_with_each_other():
    for bits in all_strings(8):
        t = oracle_table(bits)
        realized = oracle_parikh_set(bits)
        for m in range(1, bits.size + 1):
            for c in range(m + 1):
                assert ((m, c) in realized) == oracle_detect(bits, m, c)
            assert t.min(m) == min(c for mm, c in realized if mm == m)
            assert t.max(m) == max(c for mm, c in realized if mm == m)


def test_oracle_size_cap():
    with pytest.raises(ValueError):
        oracle_table("0" * (MAX_ORACLE_LEN + 1))
