"""Input families for benchmarks and tests."""

import numpy as np

POWER_PATTERN = "01101001"
FAMILIES = ("random", "fib", "power")


def power_word(n: int) -> np.ndarray:
    reps = -(-n // len(POWER_PATTERN))
    pat = np.array([int(ch) for ch in POWER_PATTERN], dtype=np.uint8)
    return np.tile(pat, reps)[:n]


def fib_word(n: int) -> np.ndarray:
    # S_k = S_{k-1} S_{k-2}, S_0 = "0", S_1 = "01"
    a, b = [0], [0, 1]
    while len(b) < n:
        a, b = b, b + a
    return np.array((b if n > 1 else a)[:n], dtype=np.uint8)


def random_word(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, n, dtype=np.uint8)


def family_word(family: str, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
    if family == "power":
        return power_word(n)
    if family == "fib":
        return fib_word(n)
    if family == "random":
        return random_word(n, rng if rng is not None else np.random.default_rng(0))
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
