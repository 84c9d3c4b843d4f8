"""Method of the Four Russians multiplication (basic, blocked, multi-table).

A is cut into vertical stripes of k columns; the k bits of a stripe row,
read as an integer, select one precomputed combination of the matching k
rows of B, so each stripe contributes one table lookup and one row addition
per row of C. The blocked variant walks row blocks of A/C in the outer
loop and regenerates tables per block, trading cheap table rebuilds for
operands that stay in cache. The multi-table variant builds t tables for
t*k consecutive rows of B and fuses their t lookups into a single update
of each destination row.

Ragged edges are handled throughout: a final stripe of width l mod k uses
a smaller table, and trailing stripe groups use fewer than t tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .counters import counters
from .errors import DimensionError, ParameterError
from .graycode import MAX_K, CombinationTable, make_table


@dataclass(frozen=True)
class StripeSpec:
    """Validated stripe parameters: width k, table count t, row block b_s."""

    k: int
    t: int = 1
    b_s: int = 1

    def __post_init__(self):
        if not 1 <= self.k <= MAX_K:
            raise ParameterError(f"k={self.k} outside 1..{MAX_K}")
        if not 1 <= self.t <= 8:
            raise ParameterError(f"t={self.t} outside 1..8")
        if self.b_s < 1:
            raise ParameterError(f"block size {self.b_s} < 1")


def _stripes(l: int, k: int) -> list[tuple[int, int]]:
    """(start_col, width) pairs covering l columns in stripes of k."""
    out = [(sc, k) for sc in range(0, l - k + 1, k)]
    done = len(out) * k
    if done < l:
        out.append((done, l - done))
    return out


def _read_bits_rows(a: core.Mat, r0: int, r1: int, sc: int,
                    k: int) -> np.ndarray:
    """read_bits for rows [r0, r1) at once; returns table indices."""
    wi, off = divmod(sc, core.WORD_BITS)
    mask = np.uint64((1 << k) - 1)
    w = a.words
    if off + k <= core.WORD_BITS:
        ids = (w[r0:r1, wi] >> np.uint64(core.WORD_BITS - off - k)) & mask
    else:
        nlo = off + k - core.WORD_BITS
        ids = ((w[r0:r1, wi] << np.uint64(nlo))
               | (w[r0:r1, wi + 1] >> np.uint64(core.WORD_BITS - nlo))) & mask
    return ids.astype(np.intp)


def _validate(a: core.Mat, b: core.Mat, k: int, t: int,
              b_s: int) -> StripeSpec:
    if a.ncols != b.nrows:
        raise DimensionError(
            f"inner dimensions {a.ncols} and {b.nrows} differ")
    return StripeSpec(k, t, b_s)


def _mul_into(c: core.BitMatrix, a: core.Mat, b: core.Mat, k: int,
              b_s: int, t: int) -> None:
    """c += a @ b. c must be an owned matrix (rows contiguous, tails clean)."""
    assert isinstance(c, core.BitMatrix), "M4RM writes into owned C only"
    m, l, n = a.nrows, a.ncols, b.ncols
    if c.nrows != m or c.ncols != n:
        raise DimensionError(
            f"target {c.nrows}x{c.ncols} != product {m}x{n}")
    if m == 0 or n == 0 or l == 0:
        return
    stripes = _stripes(l, min(k, l))
    tables = [CombinationTable(min(k, l), n)
              for _ in range(min(t, len(stripes)))]
    table_words = [tbl.words for tbl in tables]
    scalar = core.scalar_xor_enabled()
    width = c.width
    bm = min(b_s, m)
    acc = np.empty((bm, width), dtype=np.uint64)
    for r0 in range(0, m, b_s):
        r1 = min(r0 + b_s, m)
        cnt = r1 - r0
        for g0 in range(0, len(stripes), t):
            group = stripes[g0:g0 + t]
            for gi, (sc, kw) in enumerate(group):
                make_table(b, sc, kw, tables[gi])
            # All indices are read from A before any table lookups.
            ids = [_read_bits_rows(a, r0, r1, sc, kw) for sc, kw in group]
            if scalar:
                for ri in range(cnt):
                    row = table_words[0][ids[0][ri]].copy()
                    for gi in range(1, len(group)):
                        row ^= table_words[gi][ids[gi][ri]]
                    dst = c.words[r0 + ri]
                    for wi in range(width):
                        dst[wi] = dst[wi] ^ row[wi]
            elif len(group) == 1:
                c.words[r0:r1] ^= table_words[0][ids[0]]
            else:
                a0 = acc[:cnt]
                np.take(table_words[0], ids[0], axis=0, out=a0)
                for gi in range(1, len(group)):
                    a0 ^= table_words[gi][ids[gi]]
                c.words[r0:r1] ^= a0
            counters.c_writes += cnt
            counters.row_adds += cnt * len(group)


def mul_m4rm(a: core.Mat, b: core.Mat, k: int) -> core.BitMatrix:
    """Basic Four-Russians product: one table per stripe, all rows inner."""
    _validate(a, b, k, 1, 1)
    c = core.create(a.nrows, b.ncols)
    _mul_into(c, a, b, k, max(a.nrows, 1), 1)
    return c


def mul_m4rm_blocked(a: core.Mat, b: core.Mat, k: int,
                     b_s: int) -> core.BitMatrix:
    """Cache-friendly variant: row blocks outer, tables rebuilt per block."""
    _validate(a, b, k, 1, b_s)
    c = core.create(a.nrows, b.ncols)
    _mul_into(c, a, b, k, b_s, 1)
    return c


def mul_m4rm_multitable(a: core.Mat, b: core.Mat, k: int, t: int,
                        b_s: int) -> core.BitMatrix:
    """t tables over t*k consecutive rows of B, fused into one update."""
    _validate(a, b, k, t, b_s)
    c = core.create(a.nrows, b.ncols)
    _mul_into(c, a, b, k, b_s, t)
    return c


def mul_m4rm_into(c: core.BitMatrix, a: core.Mat, b: core.Mat, k: int,
                  b_s: int | None = None, t: int = 1) -> None:
    """Accumulating variant, c += a @ b; pass a zeroed c for the product."""
    b_s = max(a.nrows, 1) if b_s is None else b_s
    _validate(a, b, k, t, b_s)
    _mul_into(c, a, b, k, b_s, t)
