"""Chains, fans, bichromatic paths and Vizing chains.

A chain is an ordered list of edge ids whose first edge is uncoloured and
whose consecutive edges share an endpoint.  Shifting moves the gap along the
chain: each edge takes the colour of its successor and the last shifted-into
edge becomes uncoloured.

All functions read and write a colouring through a small duck-typed surface
(``colour``, ``recolour``, ``edge_with_colour_at``, ``used``, ``degree``,
``ends``, ``other``) implemented by both :class:`~vizchain.graph.Graph` and
:class:`~vizchain.graph.Overlay`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .graph import UNCOLOURED, colour_mask, lowest_colour, mask_colours


class ChainError(RuntimeError):
    """A chain contract was violated; always indicates a bug upstream."""


class PaletteFailure(Exception):
    """The sampled palette has no usable colour at some vertex."""

    def __init__(self, vertex: int):
        super().__init__(f"palette has no eligible colour at vertex {vertex}")
        self.vertex = vertex


@lru_cache(maxsize=None)
def eps_ceiling(eps: Fraction, d: int) -> int:
    """``ceil((1 + eps) * d)`` computed exactly."""
    return math.ceil((1 + eps) * d)


# -- colour-choice modes ---------------------------------------------------------

@dataclass(frozen=True)
class Plain:
    """Representative colours from ``[ceiling]`` (classic Vizing, ceiling = Delta+1)."""

    ceiling: int

    def allowed(self, col, v: int) -> int:
        return colour_mask(self.ceiling)


@dataclass(frozen=True)
class StrictlyLocal:
    """Representative colour at ``v`` must lie in ``[d(v)+1]``."""

    def allowed(self, col, v: int) -> int:
        return colour_mask(col.degree(v) + 1)


@dataclass(frozen=True)
class EpsLocal:
    """Representative colour at ``v`` must lie in ``[ceil((1+eps) d(v))]`` and in the palette.

    ``palette`` is a colour bitmask; ``None`` means no palette restriction.
    """

    eps: Fraction
    palette: int | None = None

    def allowed(self, col, v: int) -> int:
        m = colour_mask(eps_ceiling(self.eps, col.degree(v)))
        return m if self.palette is None else m & self.palette


STRICT = StrictlyLocal()


def pick_colour(mask: int, rng=None) -> int:
    """Smallest colour in ``mask``, or a uniform one when ``rng`` is given."""
    if rng is None:
        return lowest_colour(mask)
    options = mask_colours(mask)
    return options[rng.randrange(len(options))]


# -- shifting -----------------------------------------------------------------

def _shared_vertex(col, e1: int, e2: int) -> int:
    a, b = col.ends(e1)
    c, d = col.ends(e2)
    if a == c or a == d:
        return a
    if b == c or b == d:
        return b
    raise ChainError(f"edges {e1} and {e2} are not adjacent")


def shift_pair(col, e1: int, e2: int) -> None:
    """``Shift(c, e1, e2)``: move the colour of ``e2`` onto the uncoloured ``e1``."""
    _shared_vertex(col, e1, e2)
    if col.colour(e1) != UNCOLOURED:
        raise ChainError(f"edge {e1} should be uncoloured before shifting into it")
    k = col.colour(e2)
    if k == UNCOLOURED:
        raise ChainError(f"edge {e2} is uncoloured; nothing to shift")
    col.recolour(e2, UNCOLOURED)
    for x in col.ends(e1):
        if col.edge_with_colour_at(x, k) is not None:
            col.recolour(e2, k)
            raise ChainError(f"shifting colour {k} onto edge {e1} clashes at vertex {x}")
    col.recolour(e1, k)


def shift(col, chain: list[int], j: int | None = None):
    """``j``-shift ``chain`` in place (default: the full shift, ``j = len - 1``).

    Afterwards ``chain[j]`` is the chain's only uncoloured edge.  Returns ``col``.
    """
    if j is None:
        j = len(chain) - 1
    if not 0 <= j <= max(len(chain) - 1, 0):
        raise ChainError(f"shift index {j} outside chain of size {len(chain)}")
    for i in range(j):
        shift_pair(col, chain[i], chain[i + 1])
    return col


def chain_vertices(col, chain: list[int]) -> set[int]:
    out = set()
    for e in chain:
        out.update(col.ends(e))
    return out


# -- fans -------------------------------------------------------------------

class FanEnd(enum.Enum):
    SHARED = "shared"        # last representative colour is free at the centre
    REPEATED = "repeated"    # last representative colour equals an earlier one
    FORCED = "forced"        # only the avoided colour kappa2 was left (extension case 2)


@dataclass
class Fan:
    centre: int
    leaves: list[int]
    edges: list[int]
    reps: list[int]
    end: FanEnd
    repeat: int | None = None  # index i with reps[i] == reps[-1] (REPEATED only)

    def __len__(self) -> int:
        return len(self.edges)


def build_fan(col, e: int, centre: int, mode, avoid: tuple[int, int] | None = None, rng=None) -> Fan:
    """Grow a maximal fan at ``centre`` starting with the uncoloured edge ``e``.

    With ``avoid = (a1, a2)`` (a1 free at the centre, a2 free at the other end of
    ``e``) the two colours are only used as a last resort, giving the three-way
    outcome used to extend multi-step chains.
    """
    if col.colour(e) != UNCOLOURED:
        raise ChainError(f"fan must start at an uncoloured edge, edge {e} has colour {col.colour(e)}")
    u = centre
    v = col.other(e, u)
    free_u = ~col.used(u)
    avoid_mask = 0
    a2 = 0
    if avoid is not None:
        a1, a2 = avoid
        avoid_mask = (1 << a1) | (1 << a2)
    leaves, edges, reps = [v], [e], []
    fan_colours = 0
    index_of: dict[int, int] = {}
    w = v
    while True:
        cand = mode.allowed(col, w) & ~col.used(w)
        if not cand:
            if isinstance(mode, EpsLocal):
                raise PaletteFailure(w)
            raise ChainError(f"no eligible colour at vertex {w}")
        shared = cand & free_u
        if shared:
            k = pick_colour(shared & ~avoid_mask or shared, rng)
            reps.append(k)
            return Fan(u, leaves, edges, reps, FanEnd.SHARED)
        repeated = cand & fan_colours & ~avoid_mask
        if repeated:
            k = pick_colour(repeated, rng)
            reps.append(k)
            return Fan(u, leaves, edges, reps, FanEnd.REPEATED, repeat=index_of[k] - 1)
        fresh = cand & ~avoid_mask
        if fresh:
            k = pick_colour(fresh, rng)
            ux = col.edge_with_colour_at(u, k)
            x = col.other(ux, u)
            reps.append(k)
            leaves.append(x)
            edges.append(ux)
            index_of[k] = len(edges) - 1
            fan_colours |= 1 << k
            w = x
            continue
        if a2 and (cand >> a2) & 1:
            reps.append(a2)
            return Fan(u, leaves, edges, reps, FanEnd.FORCED)
        raise ChainError(f"fan at {u} exhausted at leaf {w}")


# -- bichromatic paths --------------------------------------------------------------

@dataclass
class BichromaticPath:
    root: int
    k1: int
    k2: int
    edges: list[int]
    vertices: list[int]
    complete: bool  # False when the walk stopped at ``limit`` with more path left

    def __len__(self) -> int:
        return len(self.edges)


def walk_bichromatic(col, root: int, k1: int, k2: int, limit: int | None = None) -> BichromaticPath:
    """Follow the ``(k1, k2)``-coloured path component starting at its endpoint ``root``."""
    used = col.used(root)
    has1, has2 = (used >> k1) & 1, (used >> k2) & 1
    if has1 and has2:
        raise ChainError(f"vertex {root} is interior to its ({k1},{k2}) component")
    edges: list[int] = []
    verts = [root]
    if not (has1 or has2):
        return BichromaticPath(root, k1, k2, edges, verts, True)
    nxt = k1 if has1 else k2
    x = root
    while True:
        e = col.edge_with_colour_at(x, nxt)
        if e is None:
            return BichromaticPath(root, k1, k2, edges, verts, True)
        if limit is not None and len(edges) >= limit:
            return BichromaticPath(root, k1, k2, edges, verts, False)
        edges.append(e)
        x = col.other(e, x)
        verts.append(x)
        nxt = k2 if nxt == k1 else k1


def first_strictness_violation(col, path: list[int], k1: int, k2: int) -> int | None:
    """Index of the first path edge whose swapped colour would exceed ``max(d(x), d(y)) + 1``."""
    for idx, e in enumerate(path):
        new = k1 + k2 - col.colour(e)
        x, y = col.ends(e)
        if new > max(col.degree(x), col.degree(y)) + 1:
            return idx
    return None


# -- Vizing chains -----------------------------------------------------------------

class ChainStatus(enum.Enum):
    AUGMENTING = "augmenting"
    TRUNCATED = "truncated"
    OVERLAPPING = "overlapping"
    STEP_LIMIT = "step-limit"


@dataclass
class VizingChain:
    """A fan followed by a (possibly empty, possibly cut) bichromatic path.

    ``edges`` is the chain to shift.  For an augmenting chain the last edge
    is then coloured ``final_colour``; for a truncated one it stays uncoloured
    and ``end_vertex`` is where the chain ends (the endpoint it shares with
    the previous chain edge).
    """

    fan: Fan
    path: BichromaticPath | None
    kappa: tuple[int, int]
    edges: list[int]
    status: ChainStatus
    final_colour: int = UNCOLOURED
    end_vertex: int | None = None
    shape: str = "fan"
    fan_size: int = 0  # how many leading edges of ``edges`` form the fan part

    @property
    def length(self) -> int:
        return len(self.path) if self.path is not None else 0

    @property
    def last_edge(self) -> int:
        return self.edges[-1]

    def truncate(self, t: int) -> "VizingChain":
        """The chain cut after the ``t``-th path edge (``1 <= t <= walked length``)."""
        if self.path is None or not 1 <= t <= len(self.path):
            raise ChainError(f"cannot truncate at path edge {t}")
        f = len(self.fan)
        return VizingChain(
            self.fan, self.path, self.kappa,
            self.fan.edges + self.path.edges[:t],
            ChainStatus.TRUNCATED,
            end_vertex=self.path.vertices[t - 1],
            shape="truncated",
            fan_size=f,
        )


def _other_colour(kappa: tuple[int, int], k: int) -> int:
    return kappa[0] + kappa[1] - k


def build_vizing_chain(col, e: int, mode, centre: int | None = None, trunc: int | None = None,
                       avoid: tuple[int, int] | None = None, rng=None,
                       strict_truncate: bool = False) -> VizingChain:
    """One-step Vizing chain on the uncoloured edge ``e``.

    * ``trunc``: walk at most ``trunc`` path edges; a longer path gives a
      TRUNCATED chain cut at ``trunc`` (re-cut with :meth:`VizingChain.truncate`).
    * ``strict_truncate``: cut at the first edge whose shift would break
      strict locality.
    * ``avoid``: the previous path's colours when extending a multi-step chain.
    """
    if centre is None:
        centre = col.ends(e)[0]
    u = centre
    fan = build_fan(col, e, u, mode, avoid=avoid, rng=rng)
    k = len(fan)
    if fan.end is FanEnd.SHARED:
        return VizingChain(fan, None, (0, 0), list(fan.edges), ChainStatus.AUGMENTING,
                           final_colour=fan.reps[-1], shape="fan", fan_size=k)
    kappa2 = fan.reps[-1]
    if fan.end is FanEnd.FORCED:
        kappa1 = avoid[0]
    else:
        options = mode.allowed(col, u) & ~col.used(u)
        if avoid is not None:
            options &= ~((1 << avoid[0]) | (1 << avoid[1]))
        if not options:
            if isinstance(mode, EpsLocal):
                raise PaletteFailure(u)
            raise ChainError(f"no eligible path colour at centre {u}")
        kappa1 = pick_colour(options, rng)
    kappa = (kappa1, kappa2)
    wk = fan.leaves[-1]
    path = walk_bichromatic(col, wk, kappa1, kappa2, limit=trunc)

    if strict_truncate:
        idx = first_strictness_violation(col, path.edges, kappa1, kappa2)
        if idx is not None:
            return VizingChain(fan, path, kappa, fan.edges + path.edges[:idx + 1],
                               ChainStatus.TRUNCATED, end_vertex=path.vertices[idx],
                               shape="truncated", fan_size=k)
    if not path.complete:
        return VizingChain(fan, path, kappa, fan.edges + path.edges, ChainStatus.TRUNCATED,
                           end_vertex=path.vertices[-2], shape="truncated", fan_size=k)

    end = path.vertices[-1]
    if fan.end is FanEnd.REPEATED and len(path) and end == u:
        i = fan.repeat + 1  # 1-based index of w_i
        edges = fan.edges[:i + 1] + path.edges[-2::-1]
        return VizingChain(fan, path, kappa, edges, ChainStatus.AUGMENTING,
                           final_colour=kappa2, shape="ends-at-centre", fan_size=i + 1)
    if fan.end is FanEnd.REPEATED and len(path) and end == fan.leaves[fan.repeat]:
        i = fan.repeat + 1
        edges = fan.edges[:i] + path.edges[::-1]
        return VizingChain(fan, path, kappa, edges, ChainStatus.AUGMENTING,
                           final_colour=kappa2, shape="ends-at-repeat", fan_size=i)
    if fan.end is FanEnd.FORCED and len(path) and end == u:
        # the path re-enters the previous step through u's kappa2 edge
        return VizingChain(fan, path, kappa, fan.edges + path.edges, ChainStatus.OVERLAPPING,
                           shape="forced-at-centre", fan_size=k)
    final = kappa1 if not len(path) else _other_colour(kappa, col.colour(path.edges[-1]))
    return VizingChain(fan, path, kappa, fan.edges + path.edges, ChainStatus.AUGMENTING,
                       final_colour=final, shape="path", fan_size=k)


def extension_colours(col, e: int, centre: int, kappa: tuple[int, int]) -> tuple[int, int]:
    """Order the previous path colours as ``(free at centre, free at other end)``."""
    k1, k2 = kappa
    used_u = col.used(centre)
    if not (used_u >> k1) & 1:
        a1, a2 = k1, k2
    elif not (used_u >> k2) & 1:
        a1, a2 = k2, k1
    else:
        raise ChainError(f"neither previous path colour is free at {centre}")
    y = col.other(e, centre)
    if (col.used(y) >> a2) & 1:
        raise ChainError(f"colour {a2} should be free at {y} after truncation")
    return a1, a2


def extend_chain(col, last_edge: int, centre: int, kappa: tuple[int, int], mode,
                 rng=None, trunc: int | None = None) -> VizingChain:
    """Next step of a multi-step chain, built on the truncation edge in the shifted colouring.

    The fan never uses the previous path colours unless forced; the new path
    then either has two fresh colours or reuses the previous pair.
    """
    avoid = extension_colours(col, last_edge, centre, kappa)
    return build_vizing_chain(col, last_edge, mode, centre=centre, trunc=trunc, avoid=avoid, rng=rng)


def augment(col, chain: VizingChain) -> None:
    """Shift an augmenting chain and colour its final edge."""
    if chain.status is not ChainStatus.AUGMENTING:
        raise ChainError(f"cannot augment a {chain.status.value} chain")
    shift(col, chain.edges)
    col.recolour(chain.last_edge, chain.final_colour)


# -- multi-step chains ---------------------------------------------------------------

@dataclass
class MultiStepChain:
    """Steps ``F_1+P_1, ..., F_i+P_i``; consecutive steps share the truncation edge."""

    steps: list[list[int]] = field(default_factory=list)
    kappas: list[tuple[int, int]] = field(default_factory=list)
    status: ChainStatus = ChainStatus.TRUNCATED
    trace: list[list[tuple[int, int, int]]] = field(default_factory=list)

    @property
    def edges(self) -> list[int]:
        out: list[int] = []
        for i, step in enumerate(self.steps):
            out.extend(step if i == 0 else step[1:])
        return out

    def overlaps(self, step: list[int]) -> bool:
        """Would appending ``step`` break the non-overlap rule?"""
        if len(set(step)) != len(step):
            return True
        if not self.steps:
            return False
        if step[0] != self.steps[-1][-1]:
            return True
        seen = set()
        for s in self.steps:
            seen.update(s)
        return any(e in seen for e in step[1:])


def shift_traced(col, chain: list[int], final_colour: int = UNCOLOURED) -> list[tuple[int, int, int]]:
    """Full shift (plus optional final colouring) returning ``(edge, pre, post)`` triples."""
    pre = [col.colour(e) for e in chain]
    shift(col, chain)
    if final_colour:
        col.recolour(chain[-1], final_colour)
    return [(e, a, col.colour(e)) for e, a in zip(chain, pre)]
