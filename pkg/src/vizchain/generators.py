"""Seeded instance generators: static graphs as edge arrays, and update streams.

Graph generators return ``(n, eu, ev)`` with int64 arrays; edge ``i`` joins
``eu[i]`` and ``ev[i]``.  All randomness comes from a
``numpy.random.Generator`` (graphs) or ``random.Random`` (streams).
"""
from __future__ import annotations

import random
from typing import Iterator

import numpy as np

from .graph import Graph, GraphError

DENSE_LIMIT = 4096  # up to this n, G(n,p) is drawn from a full upper-triangle mask


def _shuffled(n: int, eu: np.ndarray, ev: np.ndarray, rng: np.random.Generator):
    order = rng.permutation(len(eu))
    eu, ev = eu[order], ev[order]
    flip = rng.random(len(eu)) < 0.5
    a = np.where(flip, ev, eu)
    b = np.where(flip, eu, ev)
    return n, a.astype(np.int64), b.astype(np.int64)


def gnp(n: int, p: float, rng: np.random.Generator):
    """Erdos-Renyi G(n, p), edges in random order with random orientation."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if n <= DENSE_LIMIT:
        iu, iv = np.triu_indices(n, 1)
        keep = rng.random(iu.size) < p
        return _shuffled(n, iu[keep], iv[keep], rng)
    pairs = n * (n - 1) // 2
    m = int(rng.binomial(pairs, p))
    idx = np.unique(rng.integers(0, pairs, size=m))
    while idx.size < m:
        extra = rng.integers(0, pairs, size=m - idx.size)
        idx = np.unique(np.concatenate([idx, extra]))
    # decode the index of pair (u, v), u < v, in row-major upper-triangle order
    u = (n - 2 - np.floor(np.sqrt(-8.0 * idx + 4.0 * n * (n - 1) - 7) / 2.0 - 0.5)).astype(np.int64)
    v = idx + u + 1 - n * (n - 1) // 2 + (n - u) * (n - u - 1) // 2
    return _shuffled(n, u, v.astype(np.int64), rng)


def regular(n: int, d: int, rng: np.random.Generator):
    """Uniformly random ``d``-regular graph (via networkx)."""
    import networkx as nx

    if n * d % 2 or d >= n:
        raise ValueError(f"no {d}-regular graph on {n} vertices")
    h = nx.random_regular_graph(d, n, seed=int(rng.integers(2 ** 32)))
    e = np.array(sorted(tuple(sorted(x)) for x in h.edges()), dtype=np.int64).reshape(-1, 2)
    return _shuffled(n, e[:, 0], e[:, 1], rng)


def max_degree_graph(n: int, d: int, rng: np.random.Generator):
    """Random graph with maximum degree at most ``d``: scan all pairs in random
    order and keep a pair while both ends still have degree below ``d``."""
    iu, iv = np.triu_indices(n, 1)
    deg = [0] * n
    keep_u, keep_v = [], []
    for i in rng.permutation(iu.size).tolist():
        u, v = int(iu[i]), int(iv[i])
        if deg[u] < d and deg[v] < d:
            deg[u] += 1
            deg[v] += 1
            keep_u.append(u)
            keep_v.append(v)
    return _shuffled(n, np.array(keep_u, dtype=np.int64), np.array(keep_v, dtype=np.int64), rng)


def star(n: int):
    """Hub 0 joined to leaves ``1..n-1``."""
    leaves = np.arange(1, n, dtype=np.int64)
    return n, np.zeros_like(leaves), leaves


def path(n: int):
    a = np.arange(max(n - 1, 0), dtype=np.int64)
    return n, a, a + 1


def complete(n: int):
    iu, iv = np.triu_indices(n, 1)
    return n, iu.astype(np.int64), iv.astype(np.int64)


GENERATORS = {
    "gnp": (("n", int), ("p", float)),
    "regular": (("n", int), ("d", int)),
    "maxdeg": (("n", int), ("d", int)),
    "star": (("n", int),),
    "path": (("n", int),),
    "complete": (("n", int),),
}


def from_spec(spec: list[str], seed: int | None = None):
    """Build a graph from tokens such as ``["gnp", "500", "0.05"]``."""
    if not spec or spec[0] not in GENERATORS:
        raise ValueError(f"unknown generator {spec[:1]}; choose from {', '.join(GENERATORS)}")
    kind, fields = spec[0], GENERATORS[spec[0]]
    if len(spec) - 1 != len(fields):
        names = " ".join(name for name, _ in fields)
        raise ValueError(f"generator '{kind}' takes: {names}")
    args = [cast(tok) for (_, cast), tok in zip(fields, spec[1:])]
    rng = np.random.default_rng(seed)
    if kind == "gnp":
        return gnp(args[0], args[1], rng)
    if kind == "regular":
        return regular(args[0], args[1], rng)
    if kind == "maxdeg":
        return max_degree_graph(args[0], args[1], rng)
    return {"star": star, "path": path, "complete": complete}[kind](args[0])


def to_graph(n: int, eu, ev) -> Graph:
    return Graph.from_edges(n, zip(np.asarray(eu).tolist(), np.asarray(ev).tolist()))


def graph_arrays(g: Graph):
    """``(n, eu, ev)`` for a graph whose edge ids are ``0..m-1``."""
    ids = sorted(g.edges())
    if ids != list(range(len(ids))):
        raise GraphError("edge ids are not contiguous")
    ends = np.array([g.ends(e) for e in ids], dtype=np.int64).reshape(-1, 2)
    return g.n, ends[:, 0].copy(), ends[:, 1].copy()


# -- update streams -------------------------------------------------------------------

class _EdgeBag:
    """Set of vertex pairs with O(1) insert, delete and uniform sampling."""

    def __init__(self):
        self.items: list[tuple[int, int]] = []
        self.pos: dict[tuple[int, int], int] = {}

    def __contains__(self, e) -> bool:
        return e in self.pos

    def __len__(self) -> int:
        return len(self.items)

    def add(self, e) -> None:
        self.pos[e] = len(self.items)
        self.items.append(e)

    def remove(self, e) -> None:
        i = self.pos.pop(e)
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def pick(self, rng: random.Random):
        return self.items[rng.randrange(len(self.items))]


def random_stream(n: int, updates: int, rng: random.Random, warmup: int | None = None,
                  max_edges: int | None = None) -> Iterator[tuple[str, int, int]]:
    """Insert ``warmup`` random edges, then insert or delete with probability 1/2 each.

    Inserts pick a uniformly random absent pair, deletes a uniformly random
    present edge.  ``warmup`` defaults to ``min(2n, updates // 2)``.
    """
    if n < 2:
        raise ValueError("a stream needs at least two vertices")
    full = n * (n - 1) // 2
    cap = full if max_edges is None else min(max_edges, full)
    warm = min(2 * n, updates // 2) if warmup is None else warmup
    bag = _EdgeBag()
    for i in range(updates):
        insert = len(bag) < warm if i < warm else rng.random() < 0.5
        if insert and len(bag) >= cap:
            insert = False
        if not insert and not len(bag):
            insert = True
        if insert:
            while True:
                u, v = rng.randrange(n), rng.randrange(n)
                if u != v and (min(u, v), max(u, v)) not in bag:
                    break
            bag.add((min(u, v), max(u, v)))
            yield "+", u, v
        else:
            u, v = bag.pick(rng)
            bag.remove((u, v))
            yield "-", u, v


def ramp_stream(n: int, rng: random.Random, hub_degree: int = 200, low: int = 10,
                background: int | None = None) -> Iterator[tuple[str, int, int]]:
    """Sparse random background, then grow hub 0 to ``hub_degree`` and shrink it to ``low``."""
    if hub_degree >= n:
        raise ValueError("hub degree must be below n")
    if background is None:
        background = n
    bag = _EdgeBag()
    while len(bag) < background:
        u, v = rng.randrange(1, n), rng.randrange(1, n)
        if u != v and (min(u, v), max(u, v)) not in bag:
            bag.add((min(u, v), max(u, v)))
            yield "+", u, v
    leaves = rng.sample(range(1, n), hub_degree)
    for x in leaves:
        yield "+", 0, x
    rng.shuffle(leaves)
    for x in leaves[: hub_degree - low]:
        yield "-", 0, x


def write_stream(path, updates) -> int:
    count = 0
    with open(path, "w") as fh:
        for op, u, v in updates:
            fh.write(f"{op} {u} {v}\n")
            count += 1
    return count


def read_stream(path) -> list[tuple[int, str, int, int]]:
    """Parse ``+ u v`` / ``- u v`` lines into ``(lineno, op, u, v)``."""
    out = []
    with open(path) as fh:
        for lineno, ln in enumerate(fh, start=1):
            parts = ln.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) != 3 or parts[0] not in "+-":
                raise GraphError(f"{path}:{lineno}: expected '+ u v' or '- u v'")
            try:
                out.append((lineno, parts[0], int(parts[1]), int(parts[2])))
            except ValueError:
                raise GraphError(f"{path}:{lineno}: vertex ids must be integers") from None
    return out
