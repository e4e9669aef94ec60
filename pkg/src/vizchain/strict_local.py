"""Static edge colouring where every edge uv gets a colour <= max(d(u), d(v)) + 1.

Each uncoloured edge is handled by repeatedly building a strictly local
Vizing chain; a chain that would push some edge out of its list is cut at
that edge, shifted, and the construction restarts on the freshly uncoloured
edge.  The potential

    phi = sum_v |{k <= d(v) + 1 : k free at v}|

drops by at least one per cut chain, which bounds the number of restarts.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .chains import (
    STRICT,
    ChainStatus,
    Plain,
    augment,
    build_vizing_chain,
    chain_vertices,
    shift,
)
from .graph import Graph, colour_mask


class PotentialError(AssertionError):
    """The potential failed to drop where the construction guarantees it does."""


def vertex_potential(col, v: int) -> int:
    return (colour_mask(col.degree(v) + 1) & ~col.used(v)).bit_count()


def potential_phi(g: Graph) -> int:
    return sum(vertex_potential(g, v) for v in range(g.n))


@dataclass
class StrictStats:
    edges: int = 0
    chains: int = 0
    truncated: int = 0
    fan_shifts: int = 0
    phi_initial: int = 0
    phi: int = 0
    phi_max: int = 0
    phi_bound: int = 0
    shapes: dict[str, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "edges": self.edges,
            "chains": self.chains,
            "truncated_shifts": self.truncated,
            "phi_initial": self.phi_initial,
            "phi_final": self.phi,
            "phi_max": self.phi_max,
            "phi_bound": self.phi_bound,
        }


def _local_phi(col, verts) -> int:
    return sum(vertex_potential(col, v) for v in verts)


def colour_edge_strictly_local(g: Graph, e: int, stats: StrictStats | None = None,
                               check_potential: bool = True, rng=None) -> int:
    """Colour the uncoloured edge ``e`` keeping the colouring strictly local.

    Colour choices are the smallest eligible ones unless ``rng`` is given,
    in which case they are uniform.  Returns the number of cut chains that
    were shifted on the way.
    """
    if stats is None:
        stats = StrictStats(phi=potential_phi(g), phi_bound=g.n * (g.max_degree + 1))
    centre = g.ends(e)[0]
    cuts = 0
    limit = g.n * (g.max_degree + 1) + 1
    while True:
        ch = build_vizing_chain(g, e, STRICT, centre=centre, strict_truncate=True, rng=rng)
        stats.chains += 1
        stats.shapes[ch.shape] = stats.shapes.get(ch.shape, 0) + 1
        verts = chain_vertices(g, ch.edges) if check_potential else ()
        before = _local_phi(g, verts) if check_potential else 0
        fan_part = ch.edges[:ch.fan_size]
        shift(g, fan_part)
        stats.fan_shifts += 1
        if check_potential:
            after_fan = _local_phi(g, verts)
            if after_fan > before:
                raise PotentialError(f"fan shift raised phi by {after_fan - before} (edge {e})")
        shift(g, ch.edges[ch.fan_size - 1:])
        if ch.status is ChainStatus.AUGMENTING:
            g.recolour(ch.last_edge, ch.final_colour)
        if check_potential:
            after = _local_phi(g, verts)
            drop = before - after
            if ch.status is ChainStatus.TRUNCATED and drop < 1:
                raise PotentialError(f"cut chain changed phi by {-drop}, expected a drop (edge {e})")
            if ch.status is ChainStatus.AUGMENTING and drop < 0:
                raise PotentialError(f"augmenting chain raised phi by {-drop} (edge {e})")
            stats.phi -= drop
            stats.phi_max = max(stats.phi_max, stats.phi)
            if not 0 <= stats.phi <= stats.phi_bound:
                raise PotentialError(f"phi={stats.phi} outside [0, {stats.phi_bound}]")
        if ch.status is ChainStatus.AUGMENTING:
            stats.edges += 1
            return cuts
        cuts += 1
        stats.truncated += 1
        if cuts > limit:
            raise PotentialError(f"more than n(Delta+1) cut chains while colouring edge {e}")
        e = ch.last_edge
        centre = ch.end_vertex


def colour_graph(g: Graph, check_potential: bool = True, rng=None) -> StrictStats:
    """Colour every uncoloured edge of ``g`` in edge-id order (``rng``: random colour choices)."""
    phi = potential_phi(g)
    stats = StrictStats(phi_initial=phi, phi=phi, phi_max=phi, phi_bound=g.n * (g.max_degree + 1))
    if phi > stats.phi_bound:
        raise PotentialError(f"phi={phi} exceeds n(Delta+1)={stats.phi_bound}")
    for e in sorted(g.edges()):
        if not g.colour(e):
            colour_edge_strictly_local(g, e, stats, check_potential, rng)
    return stats


def colour_graph_plain(g: Graph) -> int:
    """Classic (Delta+1)-colouring with full, uncut Vizing chains.  Returns the chain count."""
    mode = Plain(g.max_degree + 1)
    count = 0
    for e in sorted(g.edges()):
        if not g.colour(e):
            augment(g, build_vizing_chain(g, e, mode))
            count += 1
    return count


def colour_arrays(n: int, eu, ev, check_potential: bool = True):
    """Compiled equivalent of :func:`colour_graph` on edge arrays ``eu[i] -- ev[i]``.

    Returns ``(colours, stats)`` where ``colours[i]`` is the colour of edge ``i``.
    Makes the same choices as the reference colourer, edge by edge.
    """
    import numpy as np

    from . import _kernel

    eu = np.ascontiguousarray(eu, dtype=np.int64)
    ev = np.ascontiguousarray(ev, dtype=np.int64)
    col, raw = _kernel.strict_local_colour(n, eu, ev, check_potential)
    if raw[_kernel.SHIFT_ERR]:
        raise RuntimeError("compiled colourer hit an illegal shift")
    deg = np.bincount(np.concatenate([eu, ev]), minlength=n) if n else np.zeros(0, np.int64)
    delta = int(deg.max()) if len(eu) else 0
    stats = StrictStats(
        edges=len(eu), chains=int(raw[_kernel.CHAINS]), truncated=int(raw[_kernel.CUTS]),
        phi_initial=int(raw[_kernel.PHI_INITIAL]), phi=int(raw[_kernel.PHI_FINAL]),
        phi_max=int(raw[_kernel.PHI_MAX]), phi_bound=n * (delta + 1),
    )
    if raw[_kernel.FAN_RISE]:
        raise PotentialError(f"fan shift raised phi {raw[_kernel.FAN_RISE]} times")
    if raw[_kernel.CUT_NO_DROP]:
        raise PotentialError(f"cut chain failed to lower phi {raw[_kernel.CUT_NO_DROP]} times")
    if raw[_kernel.AUG_RISE]:
        raise PotentialError(f"augmenting chain raised phi {raw[_kernel.AUG_RISE]} times")
    if raw[_kernel.PHI_OOB]:
        raise PotentialError("phi left [0, n(Delta+1)]")
    return col, stats


def colour_graph_fast(g: Graph, check_potential: bool = True) -> StrictStats:
    """:func:`colour_arrays` applied to an uncoloured ``g`` with edge ids ``0..m-1``."""
    if g.coloured_count():
        raise ValueError("the compiled colourer starts from an empty colouring")
    ids = sorted(g.edges())
    if ids != list(range(len(ids))):
        raise ValueError("the compiled colourer needs contiguous edge ids")
    eu = [g.ends(e)[0] for e in ids]
    ev = [g.ends(e)[1] for e in ids]
    col, stats = colour_arrays(g.n, eu, ev, check_potential)
    for e, k in zip(ids, col.tolist()):
        g.recolour(e, k)
    return stats
