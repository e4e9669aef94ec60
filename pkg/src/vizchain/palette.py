"""Random local palettes for the dynamic colourer.

A palette ``S`` is *eps-local* when every non-isolated vertex ``v`` keeps a
free colour in ``S`` within its range ``[ceil((1+eps) d(v))]``.  Palettes are
built per dyadic block ``I_i = {2^i, ..., 2^(i+1) - 1}`` of the colour range:
small blocks are taken whole, large ones are subsampled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .chains import eps_ceiling
from .graph import colour_mask, mask_colours

DEFAULT_CDENSITY = 8


def as_fraction(eps) -> Fraction:
    """Exact rational for ``eps``; floats go through their decimal repr so 0.1 means 1/10."""
    if isinstance(eps, Fraction):
        f = eps
    elif isinstance(eps, float):
        f = Fraction(repr(eps))
    else:
        f = Fraction(eps)
    if not 0 < f <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    return f


def intervals(top: int) -> list[tuple[int, int]]:
    """Dyadic blocks ``(2^i, 2^(i+1)-1)`` up to the one containing ``top``."""
    if top < 1:
        return []
    return [(1 << i, (1 << (i + 1)) - 1) for i in range(top.bit_length())]


def sample_threshold(n: int, eps: Fraction, cdensity: float) -> int:
    return math.ceil(cdensity * math.log(max(n, 2)) / eps)


@dataclass(frozen=True)
class Palette:
    mask: int
    eps: Fraction
    top: int

    @property
    def colours(self) -> list[int]:
        return mask_colours(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, k: int) -> bool:
        return k > 0 and bool((self.mask >> k) & 1)


def sample_palette(g, eps, cdensity: float = DEFAULT_CDENSITY, rng=None) -> Palette:
    """Draw a palette inside ``[ceil((1+eps) Delta)]``.

    Blocks (clipped at the top of the range) no larger than
    ``ceil(cdensity ln n / eps)`` are included whole; from larger ones that
    many colours are drawn uniformly with replacement.
    """
    import random

    eps = as_fraction(eps)
    rng = rng or random.Random()
    top = eps_ceiling(eps, g.max_degree)
    thr = sample_threshold(g.n, eps, cdensity)
    mask = 0
    for lo, hi in intervals(top):
        hi = min(hi, top)
        if hi - lo + 1 <= thr:
            mask |= colour_mask(hi) & ~colour_mask(lo - 1)
        else:
            for _ in range(thr):
                mask |= 1 << rng.randint(lo, hi)
    return Palette(mask, eps, top)


def eps_available_mask(g, v: int, eps: Fraction) -> int:
    """Bitmask of ``A_eps(v)``: free colours at ``v`` up to ``ceil((1+eps) d(v))``."""
    return colour_mask(eps_ceiling(eps, g.degree(v))) & ~g.used(v)


def is_local_palette(palette, g, eps) -> tuple[bool, int | None]:
    """``(True, None)`` if every non-isolated vertex has a palette colour in ``A_eps``,
    else ``(False, first failing vertex)``."""
    eps = as_fraction(eps)
    mask = palette.mask if isinstance(palette, Palette) else palette
    for v in range(g.n):
        if g.degree(v) and not eps_available_mask(g, v, eps) & mask:
            return False, v
    return True, None


def dense_interval(v: int, g, eps) -> int:
    """Smallest ``i`` with ``|A_eps(v) & I_i| >= eps |I_i| / 4``.

    Such a block always exists for a vertex of positive degree, so failing
    to find one raises AssertionError.
    """
    eps = as_fraction(eps)
    if g.degree(v) == 0:
        raise ValueError(f"vertex {v} is isolated; its eps-range is empty")
    avail = eps_available_mask(g, v, eps)
    for i, (lo, hi) in enumerate(intervals(eps_ceiling(eps, g.degree(v)))):
        block = colour_mask(hi) & ~colour_mask(lo - 1)
        if 4 * (avail & block).bit_count() >= eps * (hi - lo + 1):
            return i
    raise AssertionError(f"no dense block at vertex {v}")
