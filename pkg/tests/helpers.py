import numpy as np


def random_bits(rng, n):
    return rng.integers(0, 2, n, dtype=np.uint8)


def all_strings(max_len):
    """Every binary string of length 1..max_len as uint8 arrays."""
    for n in range(1, max_len + 1):
        codes = np.arange(1 << n, dtype=np.int64)
        shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
        table = ((codes[:, None] >> shifts) & 1).astype(np.uint8)
        yield from table
