"""Bit-packed dense matrices over GF(2).

Storage is flat row-major: 64 consecutive row entries share one machine
word. Column c of a row lives in word c // 64 at bit position 63 - (c % 64)
(most significant bit first), so reading k consecutive columns is a shift
and mask. A `row_index` array holds the word offset of the first word of
every row inside the owning buffer; in-place submatrices ("matrix windows")
reuse the parent buffer through adjusted offsets and must start on a word
boundary. Bits in a row's last word beyond `ncols` ("trailing bits") are
kept zero in owned matrices, and every write through a window preserves
whatever lies beyond the window's right edge.
"""

from __future__ import annotations

import weakref

import numpy as np

from .counters import counters
from .errors import AlignmentError, DimensionError, FormatError

WORD_BITS = 64
_FULL_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)

_FILE_MAGIC = b"GF2M"
_FILE_VERSION = 1
_HEADER_BYTES = 4 + 1 + 8 + 8

# When True, row additions run as plain per-word Python loops instead of
# vectorized word-array XOR. Benchmark switch only; results are identical.
_scalar_xor = False


def set_scalar_xor(enabled: bool) -> None:
    """Force plain 64-bit word loops for row additions (benchmark switch)."""
    global _scalar_xor
    _scalar_xor = bool(enabled)


def scalar_xor_enabled() -> bool:
    return _scalar_xor


def words_per_row(ncols: int) -> int:
    return (ncols + WORD_BITS - 1) // WORD_BITS


def tail_mask(ncols: int) -> np.uint64:
    """Mask of the used bits in a row's last word (all-ones if none spare)."""
    rem = ncols % WORD_BITS
    if rem == 0:
        return _FULL_MASK
    return np.uint64(_FULL_MASK) << np.uint64(WORD_BITS - rem)


class BitMatrix:
    """Owned bit-packed matrix.

    Attributes:
        nrows, ncols: dimensions (>= 0).
        width: words per row, ceil(ncols / 64).
        data: contiguous uint64 buffer of nrows * width words.
        row_index: word offset of each row's first word inside `data`.
        words: the buffer viewed as an (nrows, width) array.
    """

    __slots__ = ("nrows", "ncols", "width", "data", "row_index", "words",
                 "__weakref__")

    def __init__(self, nrows: int, ncols: int):
        if nrows < 0 or ncols < 0:
            raise DimensionError(f"negative dimensions {nrows}x{ncols}")
        self.nrows = nrows
        self.ncols = ncols
        self.width = words_per_row(ncols)
        nwords = nrows * self.width
        self.data = np.zeros(nwords, dtype=np.uint64)
        self.row_index = np.arange(nrows, dtype=np.int64) * self.width
        self.words = self.data.reshape(nrows, self.width)
        counters.note_alloc(nwords)
        weakref.finalize(self, counters.note_free, nwords)

    @property
    def buf(self) -> np.ndarray:
        return self.data

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (BitMatrix, MatrixWindow)):
            return NotImplemented
        return equal(self, other)

    def __hash__(self):
        return id(self)

    def __getitem__(self, rc) -> int:
        return get_bit(self, rc[0], rc[1])

    def __setitem__(self, rc, v: int) -> None:
        set_bit(self, rc[0], rc[1], v)

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


class MatrixWindow:
    """Non-owning view of a rectangular region of a BitMatrix.

    The starting column must be word-aligned; the width may be ragged
    (operations mask the last word so bits beyond the right edge are
    neither read nor clobbered). Reads and writes alias the parent.
    """

    __slots__ = ("parent", "row_offset", "col_offset", "nrows", "ncols",
                 "width", "row_index", "words")

    def __init__(self, parent: BitMatrix, row_offset: int, col_offset: int,
                 nrows: int, ncols: int):
        if col_offset % WORD_BITS != 0:
            raise AlignmentError(
                f"window column offset {col_offset} is not a multiple of 64")
        if nrows < 0 or ncols < 0:
            raise DimensionError(f"negative window {nrows}x{ncols}")
        if row_offset < 0 or col_offset < 0 \
                or row_offset + nrows > parent.nrows \
                or col_offset + ncols > parent.ncols:
            raise DimensionError(
                f"window {nrows}x{ncols}@({row_offset},{col_offset}) exceeds "
                f"parent {parent.nrows}x{parent.ncols}")
        self.parent = parent
        self.row_offset = row_offset
        self.col_offset = col_offset
        self.nrows = nrows
        self.ncols = ncols
        self.width = words_per_row(ncols)
        word_off = col_offset // WORD_BITS
        self.row_index = parent.row_index[row_offset:row_offset + nrows] \
            + word_off
        self.words = parent.words[row_offset:row_offset + nrows,
                                  word_off:word_off + self.width]

    @property
    def buf(self) -> np.ndarray:
        return self.parent.data

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (BitMatrix, MatrixWindow)):
            return NotImplemented
        return equal(self, other)

    def __hash__(self):
        return id(self)

    def __getitem__(self, rc) -> int:
        return get_bit(self, rc[0], rc[1])

    def __setitem__(self, rc, v: int) -> None:
        set_bit(self, rc[0], rc[1], v)

    def __repr__(self) -> str:
        return (f"MatrixWindow({self.nrows}x{self.ncols}@"
                f"({self.row_offset},{self.col_offset}))")


Mat = BitMatrix | MatrixWindow


def create(nrows: int, ncols: int) -> BitMatrix:
    """All-zero matrix with clean trailing bits."""
    return BitMatrix(nrows, ncols)


def identity(n: int) -> BitMatrix:
    m = BitMatrix(n, n)
    if n:
        i = np.arange(n, dtype=np.int64)
        idx = m.row_index[i] + (i >> 6)
        bits = np.uint64(1) << (63 - (i & 63)).astype(np.uint64)
        m.data[idx] = bits
    return m


def _splitmix64(seed: int, count: int) -> np.ndarray:
    """Deterministic stream of 64-bit words (splitmix64)."""
    x = (np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
         + np.arange(1, count + 1, dtype=np.uint64)
         * np.uint64(0x9E3779B97F4A7C15))
    z = x
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def random(nrows: int, ncols: int, seed: int) -> BitMatrix:
    """Uniform random matrix, deterministic for a given seed."""
    m = BitMatrix(nrows, ncols)
    if m.data.size:
        m.data[:] = _splitmix64(seed, m.data.size)
        m.words[:, -1] &= tail_mask(ncols)
    return m


def get_bit(a: Mat, r: int, c: int) -> int:
    if not (0 <= r < a.nrows and 0 <= c < a.ncols):
        raise IndexError(f"({r},{c}) out of range for {a.nrows}x{a.ncols}")
    w = a.buf[a.row_index[r] + (c >> 6)]
    return int((w >> np.uint64(63 - (c & 63))) & np.uint64(1))


def set_bit(a: Mat, r: int, c: int, v: int) -> None:
    if not (0 <= r < a.nrows and 0 <= c < a.ncols):
        raise IndexError(f"({r},{c}) out of range for {a.nrows}x{a.ncols}")
    idx = a.row_index[r] + (c >> 6)
    bit = np.uint64(1) << np.uint64(63 - (c & 63))
    if v & 1:
        a.buf[idx] |= bit
    else:
        a.buf[idx] &= ~bit


def read_bits(a: Mat, r: int, sc: int, k: int) -> int:
    """Read k consecutive entries of row r starting at column sc.

    Returns a[r,sc] * 2^(k-1) + a[r,sc+1] * 2^(k-2) + ... + a[r,sc+k-1],
    correct when the span crosses a word boundary. k is limited to 16.
    """
    if not 1 <= k <= 16:
        raise IndexError(f"read_bits width {k} outside 1..16")
    if not (0 <= r < a.nrows and 0 <= sc and sc + k <= a.ncols):
        raise IndexError(
            f"read_bits row {r} cols [{sc},{sc + k}) out of range")
    base = int(a.row_index[r])
    wi, off = divmod(sc, WORD_BITS)
    hi = int(a.buf[base + wi])
    if off + k <= WORD_BITS:
        return (hi >> (WORD_BITS - off - k)) & ((1 << k) - 1)
    nlo = off + k - WORD_BITS
    lo = int(a.buf[base + wi + 1])
    return ((hi & ((1 << (WORD_BITS - off)) - 1)) << nlo) \
        | (lo >> (WORD_BITS - nlo))


def _masked_last(words_2d: np.ndarray, ncols: int) -> np.ndarray:
    """Copy of the last word column with bits beyond ncols cleared."""
    return words_2d[:, -1] & tail_mask(ncols)


def row_add(c: Mat, r1: int, s: Mat, r2: int) -> None:
    """XOR row r2 of s into row r1 of c, word-wise."""
    if c.ncols != s.ncols:
        raise DimensionError(
            f"row_add width mismatch: {c.ncols} vs {s.ncols}")
    if not (0 <= r1 < c.nrows and 0 <= r2 < s.nrows):
        raise IndexError(f"row_add rows ({r1},{r2}) out of range")
    if c.width == 0:
        return
    dst = c.words[r1]
    src = s.words[r2]
    tm = tail_mask(c.ncols)
    counters.row_adds += 1
    if _scalar_xor:
        for i in range(c.width - 1):
            dst[i] = dst[i] ^ src[i]
        dst[-1] = dst[-1] ^ (src[-1] & tm)
        return
    dst[:-1] ^= src[:-1]
    dst[-1] ^= src[-1] & tm


def add_into(out: Mat, a: Mat, b: Mat) -> None:
    """out = a XOR b, entry-wise; out may alias a or b."""
    if a.shape != b.shape or out.shape != a.shape:
        raise DimensionError(
            f"add shapes {a.shape}, {b.shape} -> {out.shape} differ")
    if out.width == 0 or out.nrows == 0:
        return
    counters.row_adds += out.nrows
    if _scalar_xor:
        tm = tail_mask(out.ncols)
        for r in range(out.nrows):
            dst, x, y = out.words[r], a.words[r], b.words[r]
            for i in range(out.width - 1):
                dst[i] = x[i] ^ y[i]
            dst[-1] = (dst[-1] & ~tm) | ((x[-1] ^ y[-1]) & tm)
        return
    tm = tail_mask(out.ncols)
    if tm == _FULL_MASK:
        np.bitwise_xor(a.words, b.words, out=out.words)
        return
    np.bitwise_xor(a.words[:, :-1], b.words[:, :-1], out=out.words[:, :-1])
    last = (a.words[:, -1] ^ b.words[:, -1]) & tm
    out.words[:, -1] = (out.words[:, -1] & ~tm) | last


def add(a: Mat, b: Mat) -> BitMatrix:
    """Entry-wise XOR of two equal-shaped matrices; inputs unchanged."""
    if a.shape != b.shape:
        raise DimensionError(f"add shapes {a.shape} and {b.shape} differ")
    out = BitMatrix(a.nrows, a.ncols)
    add_into(out, a, b)
    return out


def copy_into(out: Mat, a: Mat) -> None:
    """Copy a into out, preserving anything beyond out's right edge."""
    if out.shape != a.shape:
        raise DimensionError(f"copy shapes {a.shape} -> {out.shape} differ")
    if out.width == 0 or out.nrows == 0:
        return
    tm = tail_mask(out.ncols)
    if tm == _FULL_MASK:
        out.words[:] = a.words
        return
    out.words[:, :-1] = a.words[:, :-1]
    out.words[:, -1] = (out.words[:, -1] & ~tm) | (a.words[:, -1] & tm)


def window(a: Mat, row_offset: int, col_offset: int,
           nrows: int, ncols: int) -> MatrixWindow:
    """Non-owning view; a window of a window flattens onto the root matrix."""
    if isinstance(a, MatrixWindow):
        return MatrixWindow(a.parent, a.row_offset + row_offset,
                            a.col_offset + col_offset, nrows, ncols)
    return MatrixWindow(a, row_offset, col_offset, nrows, ncols)


def copy_out(w: Mat) -> BitMatrix:
    """Freshly-owned matrix equal to the window contents."""
    out = BitMatrix(w.nrows, w.ncols)
    if out.data.size:
        out.words[:, :] = w.words
        out.words[:, -1] &= tail_mask(w.ncols)
    return out


def augment(a: Mat, b: Mat) -> BitMatrix:
    """Columns of a followed by columns of b."""
    if a.nrows != b.nrows:
        raise DimensionError(
            f"augment row counts {a.nrows} and {b.nrows} differ")
    if a.ncols % WORD_BITS == 0:
        out = BitMatrix(a.nrows, a.ncols + b.ncols)
        if a.width:
            out.words[:, :a.width] = a.words
        if b.width:
            out.words[:, a.width:] = b.words
            out.words[:, -1] &= tail_mask(out.ncols)
        return out
    dense = np.hstack([to_dense(a), to_dense(b)])
    return from_dense(dense)


def stack(a: Mat, b: Mat) -> BitMatrix:
    """Rows of a above rows of b."""
    if a.ncols != b.ncols:
        raise DimensionError(
            f"stack column counts {a.ncols} and {b.ncols} differ")
    out = BitMatrix(a.nrows + b.nrows, a.ncols)
    if out.width:
        out.words[:a.nrows] = a.words
        out.words[a.nrows:] = b.words
        out.words[:, -1] &= tail_mask(out.ncols)
    return out


def transpose(a: Mat) -> BitMatrix:
    """New matrix with result[j, i] == a[i, j]."""
    return from_dense(to_dense(a).T)


def equal(a: Mat, b: Mat) -> bool:
    """Exact dimension and entry equality."""
    if a.shape != b.shape:
        return False
    if a.nrows == 0 or a.width == 0:
        return True
    if not np.array_equal(a.words[:, :-1], b.words[:, :-1]):
        return False
    return bool(np.array_equal(_masked_last(a.words, a.ncols),
                               _masked_last(b.words, b.ncols)))


def first_difference(a: Mat, b: Mat) -> tuple[int, int] | None:
    """Coordinates of the first differing entry in row-major order."""
    if a.shape != b.shape:
        raise DimensionError(f"shapes {a.shape} and {b.shape} differ")
    if a.nrows == 0 or a.width == 0:
        return None
    diff = a.words ^ b.words
    diff[:, -1] &= tail_mask(a.ncols)
    rows = np.nonzero(diff.any(axis=1))[0]
    if rows.size == 0:
        return None
    r = int(rows[0])
    w = int(np.nonzero(diff[r])[0][0])
    word = int(diff[r, w])
    col = w * WORD_BITS + (WORD_BITS - word.bit_length())
    return (r, col)


def to_dense(a: Mat) -> np.ndarray:
    """Unpack into a (nrows, ncols) uint8 array of 0/1 entries."""
    if a.nrows == 0 or a.ncols == 0:
        return np.zeros((a.nrows, a.ncols), dtype=np.uint8)
    by = a.words.astype(">u8").view(np.uint8).reshape(a.nrows, -1)
    return np.unpackbits(by, axis=1, bitorder="big")[:, :a.ncols]


def from_dense(dense: np.ndarray) -> BitMatrix:
    """Pack a 2-D 0/1 array into a BitMatrix."""
    dense = np.asarray(dense, dtype=np.uint8) & 1
    if dense.ndim != 2:
        raise DimensionError("from_dense expects a 2-D array")
    nrows, ncols = dense.shape
    out = BitMatrix(nrows, ncols)
    if nrows == 0 or ncols == 0:
        return out
    packed = np.packbits(dense, axis=1, bitorder="big")
    nbytes = out.width * 8
    if packed.shape[1] < nbytes:
        packed = np.pad(packed, ((0, 0), (0, nbytes - packed.shape[1])))
    words = np.ascontiguousarray(packed).view(">u8").astype(np.uint64)
    out.words[:, :] = words.reshape(nrows, out.width)
    return out


def trailing_bits_clean(a: Mat) -> bool:
    """True when every bit beyond ncols in each row's last word is zero."""
    if a.nrows == 0 or a.width == 0:
        return True
    spare = ~tail_mask(a.ncols)
    return not bool(np.any(a.words[:, -1] & spare))


def save(a: Mat, path) -> None:
    """Write the GF2M file format (magic, version, dims, packed rows)."""
    header = (_FILE_MAGIC + bytes([_FILE_VERSION])
              + a.nrows.to_bytes(8, "little") + a.ncols.to_bytes(8, "little"))
    body = a.words.copy()
    if body.size:
        body[:, -1] &= tail_mask(a.ncols)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(body.astype("<u8").tobytes())


def load(path) -> BitMatrix:
    """Read a GF2M file; rejects bad magic, version, size or dirty bits."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER_BYTES:
        raise FormatError(f"truncated header at offset {len(raw)}")
    if raw[:4] != _FILE_MAGIC:
        raise FormatError("bad magic at offset 0")
    if raw[4] != _FILE_VERSION:
        raise FormatError(f"unsupported version {raw[4]} at offset 4")
    nrows = int.from_bytes(raw[5:13], "little")
    ncols = int.from_bytes(raw[13:21], "little")
    width = words_per_row(ncols)
    expect = _HEADER_BYTES + nrows * width * 8
    if len(raw) != expect:
        raise FormatError(
            f"file length {len(raw)} != expected {expect} at offset "
            f"{min(len(raw), expect)}")
    out = BitMatrix(nrows, ncols)
    if out.data.size:
        words = np.frombuffer(raw, dtype="<u8", offset=_HEADER_BYTES)
        out.data[:] = words.astype(np.uint64)
        spare = ~tail_mask(ncols)
        dirty = np.nonzero(out.words[:, -1] & spare)[0]
        if dirty.size:
            r = int(dirty[0])
            off = _HEADER_BYTES + (r * width + width - 1) * 8
            raise FormatError(
                f"dirty trailing bits in row {r} at offset {off}")
    return out
