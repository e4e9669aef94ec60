"""Independent checks on a graph and its colouring.

Every check reads the colouring only through the public query surface
(``edges``, ``ends``, ``colour``, ``degree``, ``incident``) or, for the array
variants, through plain edge/colour arrays.  None of them trusts engine
caches.  A check returns a list of :class:`Violation`; an empty list means
the property was confirmed by exhaustive scan.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graph import UNCOLOURED

PROPERNESS = "Properness"
STRICT_LOCALITY = "StrictLocality"
INVARIANT61 = "Invariant61"
OVERLAP = "Overlap"
PACKING_BOUND = "PackingBound"


@dataclass(frozen=True)
class Violation:
    kind: str
    edge: tuple[int, int] | None = None
    colour: int | None = None
    detail: str = ""

    def line(self) -> str:
        edge = f"{self.edge[0]}-{self.edge[1]}" if self.edge else "-"
        colour = "-" if self.colour is None else str(self.colour)
        return f"{self.kind} edge={edge} colour={colour} detail={self.detail}"


class ColouringView:
    """Read-only graph plus an arbitrary (possibly improper) ``{edge id: colour}`` map."""

    def __init__(self, g, colours: dict[int, int]):
        self._g = g
        self._colours = colours
        self.n = g.n

    def edges(self):
        return self._g.edges()

    def ends(self, e):
        return self._g.ends(e)

    def degree(self, v):
        return self._g.degree(v)

    def incident(self, v):
        return self._g.incident(v)

    @property
    def max_degree(self):
        return self._g.max_degree

    def colour(self, e):
        return self._colours.get(e, UNCOLOURED)


# -- properness -------------------------------------------------------------------

def check_proper(g) -> list[Violation]:
    """Every pair of same-coloured edges meeting at a vertex."""
    out = []
    for v in range(g.n):
        by_colour: dict[int, list[int]] = {}
        for e in g.incident(v):
            k = g.colour(e)
            if k != UNCOLOURED:
                by_colour.setdefault(k, []).append(e)
        for k, es in by_colour.items():
            es.sort()
            for i in range(len(es)):
                for j in range(i + 1, len(es)):
                    out.append(Violation(PROPERNESS, g.ends(es[i]), k,
                                         f"clashes with edge {'-'.join(map(str, g.ends(es[j])))} at vertex {v}"))
    return out


def check_proper_arrays(n: int, eu, ev, col) -> list[Violation]:
    """Vectorised :func:`check_proper` for edge arrays; reports each clashing pair once."""
    eu, ev, col = np.asarray(eu), np.asarray(ev), np.asarray(col)
    idx = np.flatnonzero(col != UNCOLOURED)
    if idx.size == 0:
        return []
    verts = np.concatenate([eu[idx], ev[idx]])
    cols = np.concatenate([col[idx], col[idx]])
    eids = np.concatenate([idx, idx])
    order = np.lexsort((eids, cols, verts))
    verts, cols, eids = verts[order], cols[order], eids[order]
    same = (verts[1:] == verts[:-1]) & (cols[1:] == cols[:-1])
    out = []
    for start in np.flatnonzero(same & ~np.concatenate([[False], same[:-1]])).tolist():
        end = start + 1
        while end < len(same) and same[end]:
            end += 1
        group = eids[start:end + 1].tolist()
        for x in range(len(group)):
            for y in range(x + 1, len(group)):
                a, b = group[x], group[y]
                out.append(Violation(PROPERNESS, (int(eu[a]), int(ev[a])), int(cols[start]),
                                     f"clashes with edge {int(eu[b])}-{int(ev[b])} at vertex {int(verts[start])}"))
    return out


# -- strict locality ----------------------------------------------------------------

def check_strict_local(g) -> list[Violation]:
    """Coloured edges ``uv`` with colour above ``max(d(u), d(v)) + 1``."""
    out = []
    for e in sorted(g.edges()):
        k = g.colour(e)
        if k == UNCOLOURED:
            continue
        u, v = g.ends(e)
        limit = max(g.degree(u), g.degree(v)) + 1
        if k > limit:
            out.append(Violation(STRICT_LOCALITY, (u, v), k, f"limit={limit}"))
    return out


def check_strict_local_arrays(n: int, eu, ev, col) -> list[Violation]:
    eu, ev, col = np.asarray(eu), np.asarray(ev), np.asarray(col)
    deg = np.bincount(np.concatenate([eu, ev]), minlength=n)
    limit = np.maximum(deg[eu], deg[ev]) + 1
    bad = np.flatnonzero(col > limit)
    return [Violation(STRICT_LOCALITY, (int(eu[i]), int(ev[i])), int(col[i]), f"limit={int(limit[i])}")
            for i in bad.tolist()]


def check_uncoloured_arrays(eu, ev, col) -> list[Violation]:
    col = np.asarray(col)
    return [Violation(PROPERNESS, (int(eu[i]), int(ev[i])), 0, "edge left uncoloured")
            for i in np.flatnonzero(col == UNCOLOURED).tolist()]


# -- the dynamic colourer's counting bound ---------------------------------------------

def check_invariant61(g, eps) -> list[Violation]:
    """Colours ``k`` with more ``k``-edges than vertices that have ``k`` in range and in use."""
    from fractions import Fraction

    eps = Fraction(eps) if not isinstance(eps, float) else Fraction(repr(eps))
    lhs: Counter = Counter()
    for e in g.edges():
        k = g.colour(e)
        if k != UNCOLOURED:
            lhs[k] += 1
    rhs: Counter = Counter()
    for v in range(g.n):
        top = math.ceil((1 + eps) * g.degree(v))
        for e in g.incident(v):
            k = g.colour(e)
            if k != UNCOLOURED and k <= top:
                rhs[k] += 1
    return [Violation(INVARIANT61, None, k, f"edges={lhs[k]} vertices={rhs[k]}")
            for k in sorted(lhs) if lhs[k] > rhs[k]]


# -- multi-step chains -------------------------------------------------------------------

def check_non_overlapping(chain) -> list[Violation]:
    """Check a multi-step chain given as its list of steps (or an object with ``.steps``).

    Steps ``j < k`` may share an edge only when ``k = j + 1`` and that edge is
    the last of step ``j`` and the first of step ``k``; no step repeats an edge.
    """
    steps = [list(s) for s in getattr(chain, "steps", chain)]
    out = []
    for i, s in enumerate(steps):
        for e, c in Counter(s).items():
            if c > 1:
                out.append(Violation(OVERLAP, None, None, f"edge id {e} repeated {c} times in step {i + 1}"))
    where: dict[int, list[int]] = {}
    for i, s in enumerate(steps):
        for e in set(s):
            where.setdefault(e, []).append(i)
    for e, idx in sorted(where.items()):
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                j, k = idx[a], idx[b]
                legal = k == j + 1 and steps[j][-1] == e and steps[k][0] == e
                if not legal:
                    out.append(Violation(OVERLAP, None, None,
                                         f"edge id {e} shared by steps {j + 1} and {k + 1}"))
    return out


# -- packing census ---------------------------------------------------------------------

@dataclass
class CensusReport:
    chains: int
    delta: int
    max_membership: int
    bound: int
    union_vertices: int
    union_edges: int
    counts: dict[int, int]

    @property
    def density(self) -> float:
        return self.union_edges / self.union_vertices if self.union_vertices else 0.0

    def violations(self) -> list[Violation]:
        out = []
        if self.max_membership > self.bound:
            out.append(Violation(PACKING_BOUND, None, None,
                                 f"an edge lies on {self.max_membership} chains > 4*Delta^2 = {self.bound}"))
        if 2 * self.union_edges > self.delta * self.union_vertices:
            out.append(Violation(PACKING_BOUND, None, None,
                                 f"union density {self.density:.3f} > Delta/2 = {self.delta / 2}"))
        return out


def census_one_step(g, chains: dict[int, list[int]]) -> CensusReport:
    """Count, for every coloured edge, how many of the given chains contain it.

    ``chains`` maps each root vertex to one chain (a list of edge ids), so
    there is at most one chain per vertex by construction.  Also reports the
    size of the union subgraph ``H`` of all chain edges.
    """
    counts: Counter = Counter()
    union_e: set[int] = set()
    for chain in chains.values():
        union_e.update(chain)
        for e in set(chain):
            if g.colour(e) != UNCOLOURED:
                counts[e] += 1
    union_v = {x for e in union_e for x in g.ends(e)}
    delta = g.max_degree
    return CensusReport(
        chains=len(chains), delta=delta,
        max_membership=max(counts.values(), default=0), bound=4 * delta * delta,
        union_vertices=len(union_v), union_edges=len(union_e), counts=dict(counts),
    )


def one_step_family(g, rng=None, trunc: int | None = None) -> dict[int, list[int]]:
    """One plain (Delta+1) Vizing chain per vertex that has an uncoloured incident edge.

    All chains are built on the same colouring, which is left unchanged.
    With ``rng`` the uncoloured edge and every colour choice are random;
    otherwise the smallest choices are taken.
    """
    from .chains import Plain, build_vizing_chain

    mode = Plain(g.max_degree + 1)
    family = {}
    for v in range(g.n):
        open_edges = sorted(e for e in g.incident(v) if g.colour(e) == UNCOLOURED)
        if not open_edges:
            continue
        e = open_edges[rng.randrange(len(open_edges))] if rng is not None else open_edges[0]
        ch = build_vizing_chain(g, e, mode, centre=v, trunc=trunc, rng=rng)
        family[v] = list(ch.edges)
    return family
