"""Default multiplication parameters derived from cache geometry.

The crossover is sized so two square operands fit in L2 (2 * cutoff^2 / 8
bytes), the M4RM block size is half of that, and the Gray-table width is
floor(0.75 * log2(b_s)) - 2, dropping by one more only when that makes all
t tables fit in L1 while the larger tables do not. The subtraction of 2
compensates for running 8 tables and is kept even for smaller t; pass an
explicit k to override. Pure operation counting would suggest k near
log2(n); in practice cache blocking dictates k through the block size, and
the smaller width wins. No hardware probing is done: cache sizes come from
arguments, a key=value config file, or conservative defaults (32 KiB L1,
1 MiB L2).
"""

from __future__ import annotations

import math

from .core import words_per_row
from .errors import ParameterError
from .strassen import MulParams

DEFAULT_L1_BYTES = 32 * 1024
DEFAULT_L2_BYTES = 1 << 20

_CONFIG_KEYS = ("l1_bytes", "l2_bytes", "cutoff", "bs", "k", "t")


def choose_k(b_s: int, l1_bytes: int, t: int = 8,
             ncols: int | None = None) -> int:
    """Gray-table width for a given block size and L1 capacity."""
    if b_s < 2:
        raise ParameterError(f"block size {b_s} < 2")
    k0 = int(math.floor(0.75 * math.log2(b_s))) - 2
    k0 = max(1, min(16, k0))
    if ncols is not None and k0 > 1:
        row_bytes = words_per_row(ncols) * 8

        def fits(k: int) -> bool:
            return t * (1 << k) * row_bytes <= l1_bytes

        if not fits(k0) and fits(k0 - 1):
            return k0 - 1
    return k0


def default_params(l1_bytes: int = DEFAULT_L1_BYTES,
                   l2_bytes: int = DEFAULT_L2_BYTES) -> MulParams:
    """MulParams for the given cache sizes.

    cutoff is the largest multiple of 64 whose two square operands fit in
    L2; b_s = cutoff / 2; t = 8; k follows choose_k with table rows sized
    at the crossover width.
    """
    if l1_bytes <= 0 or l2_bytes <= 0:
        raise ParameterError(
            f"cache sizes must be positive, got L1={l1_bytes} L2={l2_bytes}")
    cutoff = math.isqrt(4 * l2_bytes)
    cutoff -= cutoff % 64
    if cutoff < 64:
        raise ParameterError(f"L2 of {l2_bytes} bytes is too small to tune")
    b_s = cutoff // 2
    k = choose_k(b_s, l1_bytes, 8, cutoff)
    return MulParams(cutoff=cutoff, b_s=b_s, k=k, t=8,
                     l1_bytes=l1_bytes, l2_bytes=l2_bytes)


def parse_config(text: str) -> dict[str, int]:
    """Parse the key=value config format; keys are the MulParams knobs."""
    out: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ParameterError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = int(value.strip())
        except ValueError:
            raise ParameterError(
                f"config line {lineno}: {key} needs an integer") from None
    return out


def load_config(path) -> dict[str, int]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def resolve_params(l1_bytes: int | None = None, l2_bytes: int | None = None,
                   cutoff: int | None = None, bs: int | None = None,
                   k: int | None = None, t: int | None = None,
                   config: dict[str, int] | None = None) -> MulParams:
    """Combine explicit overrides, config-file values and derived defaults."""
    cfg = config or {}

    def pick(explicit, key):
        return explicit if explicit is not None else cfg.get(key)

    l1 = pick(l1_bytes, "l1_bytes")
    l2 = pick(l2_bytes, "l2_bytes")
    if l1 is None:
        l1 = DEFAULT_L1_BYTES
    if l2 is None:
        l2 = DEFAULT_L2_BYTES
    cutoff_v = pick(cutoff, "cutoff")
    if cutoff_v is None:
        cutoff_v = default_params(l1, l2).cutoff
    bs_v = pick(bs, "bs")
    if bs_v is None:
        bs_v = max(cutoff_v // 2, 1)
    t_v = pick(t, "t")
    if t_v is None:
        t_v = 8
    k_v = pick(k, "k")
    if k_v is None:
        k_v = choose_k(max(bs_v, 2), l1, t_v, cutoff_v)
    return MulParams(cutoff=cutoff_v, b_s=bs_v, k=k_v, t=t_v,
                     l1_bytes=l1, l2_bytes=l2)
