import numpy as np

from gf2mat import core


def from_rows(rows) -> core.BitMatrix:
    """Build a small matrix from a list of 0/1 row lists."""
    return core.from_dense(np.array(rows, dtype=np.uint8))


def rows_of(a) -> list:
    return core.to_dense(a).tolist()


def random_triple(rng, lo, hi):
    return (int(rng.integers(lo, hi + 1)), int(rng.integers(lo, hi + 1)),
            int(rng.integers(lo, hi + 1)))
