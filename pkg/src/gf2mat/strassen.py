"""Strassen-Winograd recursion over matrix windows, with peeling.

The recursion halves all three dimensions per level using in-place
windows, so every level needs column offsets on word boundaries; peeling
shrinks the operands to the largest dimensions divisible by 2^d * 64 (d
recursion levels), multiplies that conforming core recursively, and fixes
up the remaining rows and columns with the base-case multipliers only.
Over GF(2) subtraction equals addition, so every S/T/U step below is an
XOR. Each level performs exactly 7 recursive products and 15 quadrant
additions and touches two scratch quadrant buffers beyond the output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

from . import core
from .counters import counters
from .cubic import mul_cubic
from .errors import DimensionError, ParameterError
from .m4rm import _mul_into

_WORD = core.WORD_BITS


@dataclass
class MulParams:
    """Tuning bundle for the full dispatch stack.

    cutoff: dimension at or below which recursion hands over to M4RM.
    b_s: row block size inside M4RM (defaults to cutoff / 2).
    k: Gray-table width, 0 selects the tuning rule per multiplication.
    t: number of simultaneous Gray tables.
    l1_bytes / l2_bytes: cache capacities feeding the tuning rules.
    """

    cutoff: int = 2048
    b_s: int | None = None
    k: int = 0
    t: int = 8
    l1_bytes: int = 32768
    l2_bytes: int = 1 << 20

    def __post_init__(self):
        if self.b_s is None:
            self.b_s = max(self.cutoff // 2, 1)
        if self.cutoff < 64:
            raise ParameterError(f"cutoff {self.cutoff} < 64")
        if not 1 <= self.t <= 8:
            raise ParameterError(f"t={self.t} outside 1..8")
        if not 0 <= self.k <= 16:
            raise ParameterError(f"k={self.k} outside 0..16")
        if not 1 <= self.b_s <= self.cutoff:
            raise ParameterError(
                f"block size {self.b_s} outside 1..cutoff={self.cutoff}")


class PeelSplit(NamedTuple):
    m: int
    l: int
    n: int
    depth: int


def peel_split(m: int, l: int, n: int, cutoff: int) -> PeelSplit:
    """Largest dimensions <= inputs divisible by 2^d * 64, and the depth d.

    d is the deepest recursion for which every halved dimension stays a
    multiple of 64 and at least `cutoff`. All-zero dimensions signal that
    no level is worthwhile and the caller should fall back whole.
    """
    def ok(d: int) -> bool:
        unit = _WORD << d
        return all((x // unit) * _WORD >= cutoff for x in (m, l, n))

    if m < 1 or l < 1 or n < 1 or not ok(1):
        return PeelSplit(0, 0, 0, 0)
    depth = 1
    while ok(depth + 1):
        depth += 1
    unit = _WORD << depth
    return PeelSplit((m // unit) * unit, (l // unit) * unit,
                     (n // unit) * unit, depth)


def _effective_k(params: MulParams, ncols: int) -> int:
    if params.k:
        return params.k
    from .tuning import choose_k
    return choose_k(max(params.b_s, 2), params.l1_bytes, params.t, ncols)


def _m4rm_whole(a: core.Mat, b: core.Mat, params: MulParams) -> core.BitMatrix:
    c = core.create(a.nrows, b.ncols)
    if a.ncols:
        _mul_into(c, a, b, _effective_k(params, b.ncols), params.b_s,
                  params.t)
    return c


def _base_mul_into(dst: core.Mat, a: core.Mat, b: core.Mat,
                   params: MulParams, accumulate: bool) -> None:
    """Base-case product into a window: M4RM, or cubic for narrow B.

    The product is computed in freshly-owned contiguous storage and then
    copied (or XORed) into the destination window.
    """
    m, l, n = a.nrows, a.ncols, b.ncols
    if dst.nrows != m or dst.ncols != n:
        raise DimensionError(
            f"target {dst.nrows}x{dst.ncols} != product {m}x{n}")
    if m == 0 or n == 0:
        return
    if l == 0 or n < _WORD:
        owned = mul_cubic(a, b)
    else:
        owned = core.create(m, n)
        _mul_into(owned, a, b, _effective_k(params, n), params.b_s, params.t)
    if accumulate:
        core.add_into(dst, dst, owned)
    else:
        core.copy_into(dst, owned)


def _temp_arena(m: int, l: int, n: int, depth: int) -> list[tuple]:
    """Two scratch buffers per recursion level, allocated up front.

    Level s temps are quadrant-sized for that level; the X buffer holds
    both A-shaped sums and one product, so it spans max(l, n) columns.
    """
    pairs = []
    for s in range(1, depth + 1):
        x = core.create(m >> s, max(l >> s, n >> s))
        y = core.create(l >> s, n >> s)
        counters.temp_quadrants += 2
        pairs.append((x, y))
    return pairs


def schedule_winograd(a: core.Mat, b: core.Mat, c: core.Mat, temps: tuple,
                      multiply: Callable[[core.Mat, core.Mat, core.Mat],
                                         None]) -> None:
    """One recursion level: c = a @ b with 7 products and 15 additions.

    `temps` supplies the two scratch buffers (at least quadrant-sized);
    `multiply` computes a quadrant product into its first argument. C's
    own quadrants serve as the remaining workspace, so c must not alias
    a or b.
    """
    m, l, n = a.nrows, a.ncols, b.ncols
    if c.nrows != m or c.ncols != n:
        raise DimensionError(f"target {c.shape} != product {m}x{n}")
    if m % 2 or l % (2 * _WORD) or n % (2 * _WORD):
        raise DimensionError(
            f"dimensions {m}x{l}x{n} not halvable on word boundaries")
    m2, l2, n2 = m // 2, l // 2, n // 2
    a11 = core.window(a, 0, 0, m2, l2)
    a12 = core.window(a, 0, l2, m2, l2)
    a21 = core.window(a, m2, 0, m2, l2)
    a22 = core.window(a, m2, l2, m2, l2)
    b11 = core.window(b, 0, 0, l2, n2)
    b12 = core.window(b, 0, n2, l2, n2)
    b21 = core.window(b, l2, 0, l2, n2)
    b22 = core.window(b, l2, n2, l2, n2)
    c11 = core.window(c, 0, 0, m2, n2)
    c12 = core.window(c, 0, n2, m2, n2)
    c21 = core.window(c, m2, 0, m2, n2)
    c22 = core.window(c, m2, n2, m2, n2)
    xbuf, ybuf = temps
    xs = core.window(xbuf, 0, 0, m2, l2)   # X holding A-shaped sums
    xp = core.window(xbuf, 0, 0, m2, n2)   # X holding the A11*B11 product
    y = core.window(ybuf, 0, 0, l2, n2)

    def sub_add(dst, u, v):
        core.add_into(dst, u, v)
        counters.quadrant_adds += 1

    def sub_mul(dst, u, v):
        counters.strassen_products += 1
        multiply(dst, u, v)

    sub_add(xs, a11, a21)    # X   = A11 - A21
    sub_add(y, b22, b12)     # Y   = B22 - B12
    sub_mul(c21, xs, y)      # C21 = X * Y
    sub_add(xs, a21, a22)    # X   = A21 + A22
    sub_add(y, b12, b11)     # Y   = B12 - B11
    sub_mul(c22, xs, y)      # C22 = X * Y
    sub_add(xs, xs, a11)     # X   = X - A11
    sub_add(y, b22, y)       # Y   = B22 - Y
    sub_mul(c12, xs, y)      # C12 = X * Y
    sub_add(xs, a12, xs)     # X   = A12 - X
    sub_mul(c11, xs, b22)    # C11 = X * B22
    sub_mul(xp, a11, b11)    # X   = A11 * B11
    sub_add(c12, xp, c12)    # C12 = X + C12
    sub_add(c21, c12, c21)   # C21 = C12 + C21
    sub_add(c12, c12, c22)   # C12 = C12 + C22
    sub_add(c22, c21, c22)   # C22 = C21 + C22   (final C22)
    sub_add(c12, c12, c11)   # C12 = C12 + C11   (final C12)
    sub_add(y, y, b21)       # Y   = Y - B21
    sub_mul(c11, a22, y)     # C11 = A22 * Y
    sub_add(c21, c21, c11)   # C21 = C21 - C11   (final C21)
    sub_mul(c11, a12, b21)   # C11 = A12 * B21
    sub_add(c11, xp, c11)    # C11 = X + C11     (final C11)


def _mul_rec(c: core.Mat, a: core.Mat, b: core.Mat, depth: int,
             params: MulParams, arena: list, max_depth: int) -> None:
    counters.strassen_entries += 1
    if depth == max_depth:
        _base_mul_into(c, a, b, params, accumulate=False)
        return
    schedule_winograd(
        a, b, c, arena[depth],
        lambda cc, aa, bb: _mul_rec(cc, aa, bb, depth + 1, params, arena,
                                    max_depth))


def peel_fixup(c: core.Mat, a: core.Mat, b: core.Mat, m2: int, l2: int,
               n2: int, params: MulParams | None = None) -> None:
    """Complete c given that c[:m2, :n2] already holds a[:m2,:l2] @ b[:l2,:n2].

    Three corrections, each via the base-case multipliers (never the
    recursion): the inner-dimension remainder accumulates into the done
    block, then the remaining rows of C, then the remaining columns.
    """
    if params is None:
        params = default_params_lazy()
    m, l, n = a.nrows, a.ncols, b.ncols
    if c.nrows != m or c.ncols != n:
        raise DimensionError(f"target {c.shape} != product {m}x{n}")
    if not (0 <= m2 <= m and 0 <= l2 <= l and 0 <= n2 <= n):
        raise DimensionError(
            f"peel dims ({m2},{l2},{n2}) exceed ({m},{l},{n})")
    if l2 < l and m2 and n2:
        _base_mul_into(core.window(c, 0, 0, m2, n2),
                       core.window(a, 0, l2, m2, l - l2),
                       core.window(b, l2, 0, l - l2, n2),
                       params, accumulate=True)
    if m2 < m:
        _base_mul_into(core.window(c, m2, 0, m - m2, n),
                       core.window(a, m2, 0, m - m2, l),
                       core.window(b, 0, 0, l, n),
                       params, accumulate=False)
    if n2 < n:
        _base_mul_into(core.window(c, 0, n2, m2, n - n2),
                       core.window(a, 0, 0, m2, l),
                       core.window(b, 0, n2, l, n - n2),
                       params, accumulate=False)


def default_params_lazy() -> MulParams:
    from .tuning import default_params
    return default_params()


def mul_strassen(a: core.Mat, b: core.Mat,
                 params: MulParams | None = None) -> core.BitMatrix:
    """Full dispatch stack: recursion, then M4RM, then cubic for narrow B."""
    if a.ncols != b.nrows:
        raise DimensionError(
            f"inner dimensions {a.ncols} and {b.nrows} differ")
    if params is None:
        params = default_params_lazy()
    m, l, n = a.nrows, a.ncols, b.ncols
    if m == 0 or n == 0 or l == 0:
        return core.create(m, n)
    if n < _WORD:
        return mul_cubic(a, b)
    if min(m, l, n) <= params.cutoff:
        return _m4rm_whole(a, b, params)
    ps = peel_split(m, l, n, params.cutoff)
    if ps.depth == 0:
        return _m4rm_whole(a, b, params)
    c = core.create(m, n)
    arena = _temp_arena(ps.m, ps.l, ps.n, ps.depth)
    _mul_rec(core.window(c, 0, 0, ps.m, ps.n),
             core.window(a, 0, 0, ps.m, ps.l),
             core.window(b, 0, 0, ps.l, ps.n),
             0, params, arena, ps.depth)
    peel_fixup(c, a, b, ps.m, ps.l, ps.n, params)
    return c
