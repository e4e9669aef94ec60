"""Mutable simple graph with an edge colouring and per-vertex colour index.

Colours are positive integers; ``UNCOLOURED`` (0) marks an edge without a
colour.  Every vertex keeps a ``colour -> edge`` table plus a bitmask of the
colours present at it, so "which edge at v has colour k" and "which colours
are free at v" are both constant-time queries.
"""
from __future__ import annotations

from typing import Iterable, Iterator

UNCOLOURED = 0


class GraphError(ValueError):
    """Rejected graph mutation or malformed graph file."""


class ColouringError(ValueError):
    """Assignment that would make the colouring improper."""


def colour_mask(ceiling: int) -> int:
    """Bitmask with bits 1..ceiling set."""
    if ceiling <= 0:
        return 0
    return (1 << (ceiling + 1)) - 2


def mask_colours(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def lowest_colour(mask: int) -> int:
    """Smallest colour in ``mask`` (0 if empty)."""
    return (mask & -mask).bit_length() - 1 if mask else 0


class Graph:
    """Simple undirected graph on vertices ``0..n-1`` carrying a partial edge colouring.

    Edge ids are handed out in insertion order and never reused.
    """

    def __init__(self, n: int):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        self.n = n
        self._ends: dict[int, tuple[int, int]] = {}
        self._colour: dict[int, int] = {}
        self._adj: list[dict[int, int]] = [{} for _ in range(n)]
        self._at: list[dict[int, int]] = [{} for _ in range(n)]
        self._used: list[int] = [0] * n
        self._next_id = 0
        self._deg_count = [n]
        self._max_deg = 0

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    # -- structure ---------------------------------------------------------

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f"vertex {v} out of range 0..{self.n - 1}")

    def add_edge(self, u: int, v: int) -> int:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise GraphError(f"self-loop at {u}")
        if v in self._adj[u]:
            raise GraphError(f"duplicate edge {u}-{v}")
        e = self._next_id
        self._next_id += 1
        self._ends[e] = (u, v)
        self._colour[e] = UNCOLOURED
        self._adj[u][v] = e
        self._adj[v][u] = e
        self._bump_degree(u, +1)
        self._bump_degree(v, +1)
        return e

    def remove_edge(self, e: int) -> None:
        if e not in self._ends:
            raise GraphError(f"unknown edge {e}")
        self.recolour(e, UNCOLOURED)
        u, v = self._ends.pop(e)
        del self._colour[e]
        del self._adj[u][v]
        del self._adj[v][u]
        self._bump_degree(u, -1)
        self._bump_degree(v, -1)

    def _bump_degree(self, v: int, step: int) -> None:
        d = len(self._adj[v])
        old = d - step
        self._deg_count[old] -= 1
        if d == len(self._deg_count):
            self._deg_count.append(0)
        self._deg_count[d] += 1
        if d > self._max_deg:
            self._max_deg = d
        while self._max_deg > 0 and self._deg_count[self._max_deg] == 0:
            self._max_deg -= 1

    def edge(self, u: int, v: int) -> int | None:
        return self._adj[u].get(v)

    def has_edge(self, e: int) -> bool:
        return e in self._ends

    def ends(self, e: int) -> tuple[int, int]:
        return self._ends[e]

    def other(self, e: int, v: int) -> int:
        a, b = self._ends[e]
        return b if a == v else a

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def max_degree(self) -> int:
        return self._max_deg

    @property
    def m(self) -> int:
        return len(self._ends)

    def edges(self) -> Iterator[int]:
        return iter(self._ends)

    def incident(self, v: int) -> Iterator[int]:
        return iter(self._adj[v].values())

    def neighbours(self, v: int) -> Iterator[int]:
        return iter(self._adj[v])

    # -- colouring ---------------------------------------------------------

    def colour(self, e: int) -> int:
        return self._colour[e]

    def edge_with_colour_at(self, v: int, k: int) -> int | None:
        return self._at[v].get(k)

    def used(self, v: int) -> int:
        """Bitmask of colours present at ``v``."""
        return self._used[v]

    def available_colours(self, v: int, ceiling: int) -> set[int]:
        return set(mask_colours(colour_mask(ceiling) & ~self._used[v]))

    def recolour(self, e: int, k: int) -> None:
        """Set the colour of ``e``; raises ColouringError on a clash at an endpoint."""
        u, v = self._ends[e]
        old = self._colour[e]
        if old == k:
            return
        if k:
            for x in (u, v):
                other = self._at[x].get(k)
                if other is not None and other != e:
                    raise ColouringError(f"colour {k} already on edge {other} at vertex {x}")
        if old:
            bit = 1 << old
            for x in (u, v):
                del self._at[x][old]
                self._used[x] ^= bit
        if k:
            bit = 1 << k
            for x in (u, v):
                self._at[x][k] = e
                self._used[x] |= bit
        self._colour[e] = k

    def colouring(self) -> dict[int, int]:
        return dict(self._colour)

    def coloured_count(self) -> int:
        return sum(1 for k in self._colour.values() if k)

    def max_colour(self) -> int:
        return max(self._colour.values(), default=0)

    def copy(self) -> "Graph":
        g = Graph(self.n)
        for e in sorted(self._ends):
            g._next_id = e
            u, v = self._ends[e]
            g.add_edge(u, v)
        g._next_id = self._next_id
        for e, k in self._colour.items():
            if k:
                g.recolour(e, k)
        return g


class Overlay:
    """Scratch colouring layered over a base graph.

    Reads fall through to the base until an edge is recoloured here;
    ``commit`` writes every change back in one go, ``discard`` by simply
    dropping the overlay.  Structure queries delegate to the base.
    """

    def __init__(self, base: Graph):
        self.base = base
        self._colour: dict[int, int] = {}
        self._at: dict[tuple[int, int], int | None] = {}
        self._used: dict[int, int] = {}

    def ends(self, e: int) -> tuple[int, int]:
        return self.base._ends[e]

    def edge(self, u: int, v: int) -> int | None:
        return self.base.edge(u, v)

    def edges(self):
        return self.base.edges()

    def incident(self, v: int):
        return self.base.incident(v)

    def other(self, e: int, v: int) -> int:
        return self.base.other(e, v)

    def degree(self, v: int) -> int:
        return len(self.base._adj[v])

    @property
    def max_degree(self) -> int:
        return self.base.max_degree

    @property
    def n(self) -> int:
        return self.base.n

    def colour(self, e: int) -> int:
        k = self._colour.get(e)
        return self.base._colour[e] if k is None else k

    def edge_with_colour_at(self, v: int, k: int) -> int | None:
        key = (v, k)
        if key in self._at:
            return self._at[key]
        return self.base._at[v].get(k)

    def used(self, v: int) -> int:
        m = self._used.get(v)
        return self.base._used[v] if m is None else m

    def recolour(self, e: int, k: int) -> None:
        u, v = self.base._ends[e]
        old = self.colour(e)
        if old == k:
            return
        if k:
            for x in (u, v):
                other = self.edge_with_colour_at(x, k)
                if other is not None and other != e:
                    raise ColouringError(f"colour {k} already on edge {other} at vertex {x}")
        for x in (u, v):
            mask = self.used(x)
            if old:
                self._at[(x, old)] = None
                mask ^= 1 << old
            if k:
                self._at[(x, k)] = e
                mask |= 1 << k
            self._used[x] = mask
        self._colour[e] = k

    def changes(self) -> dict[int, tuple[int, int]]:
        """Edges whose colour differs from the base: ``{e: (old, new)}``."""
        out = {}
        for e, k in self._colour.items():
            old = self.base._colour[e]
            if old != k:
                out[e] = (old, k)
        return out

    def commit(self) -> dict[int, tuple[int, int]]:
        changed = self.changes()
        for e in changed:
            self.base.recolour(e, UNCOLOURED)
        for e, (_, k) in changed.items():
            if k:
                self.base.recolour(e, k)
        self._colour.clear()
        self._at.clear()
        self._used.clear()
        return changed


# -- text formats --------------------------------------------------------------

def read_graph(path) -> Graph:
    """Read ``n m`` followed by ``m`` lines ``u v`` (0-based)."""
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GraphError(f"{path}: empty graph file")
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
    except (IndexError, ValueError):
        raise GraphError(f"{path}:1: expected 'n m' header") from None
    if len(lines) - 1 != m:
        raise GraphError(f"{path}: header says {m} edges, found {len(lines) - 1}")
    g = Graph(n)
    for lineno, parts in enumerate(lines[1:], start=2):
        try:
            u, v = int(parts[0]), int(parts[1])
        except (IndexError, ValueError):
            raise GraphError(f"{path}:{lineno}: expected 'u v'") from None
        try:
            g.add_edge(u, v)
        except GraphError as exc:
            raise GraphError(f"{path}:{lineno}: {exc}") from None
    return g


def write_graph(path, n: int, edges: Iterable[tuple[int, int]]) -> None:
    edges = list(edges)
    with open(path, "w") as fh:
        fh.write(f"{n} {len(edges)}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def write_colouring(path, colours: Iterable[tuple[int, int]]) -> None:
    with open(path, "w") as fh:
        for e, k in colours:
            fh.write(f"{e} {k}\n")


def read_colouring(path) -> dict[int, int]:
    out = {}
    with open(path) as fh:
        for lineno, ln in enumerate(fh, start=1):
            if not ln.strip():
                continue
            try:
                e, k = ln.split()
                out[int(e)] = int(k)
            except ValueError:
                raise GraphError(f"{path}:{lineno}: expected 'edgeid colour'") from None
    return out
