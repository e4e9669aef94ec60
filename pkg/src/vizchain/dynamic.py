"""Fully dynamic edge colouring with at most ceil((1+eps) Delta) colours.

Colours adapt to the *current* maximum degree.  For every colour ``k`` the
structure keeps

    #{edges coloured k}  <=  #{v : k <= ceil((1+eps) d(v)) and k is used at v}

(the *slack* of ``k`` is the right side minus the left side).  A coloured
edge is ``k``-heavy when ``k`` lies in both endpoints' ranges, ``k``-light
when it lies in neither, and neutral otherwise; since heavy edges count
twice on the right and light ones not at all, slack = #heavy - #light.
Light edges are kept in a queue per colour so one can be evicted in O(1)
when a deletion makes a slack negative.

New edges are coloured with randomized eps-local multi-step Vizing chains
built on a sampled palette.  Each attempt works on an :class:`Overlay`, so a
failed attempt leaves the colouring untouched.
"""
from __future__ import annotations

import enum
import logging
import math
import random
from dataclasses import dataclass, field

from .chains import (
    ChainStatus,
    EpsLocal,
    MultiStepChain,
    PaletteFailure,
    build_vizing_chain,
    eps_ceiling,
    extend_chain,
    shift_traced,
)
from .graph import UNCOLOURED, Graph, Overlay, mask_colours
from .palette import DEFAULT_CDENSITY, as_fraction, sample_palette

log = logging.getLogger(__name__)


class EdgeClass(enum.Enum):
    HEAVY = "heavy"
    NEUTRAL = "neutral"
    LIGHT = "light"


class InvariantError(AssertionError):
    """A maintained bound (slack, recourse, light queues) was found broken."""


def _log2ceil(n: int) -> int:
    return max(1, math.ceil(math.log2(max(n, 2))))


@dataclass
class Params:
    """Free parameters of the colouring routine; ``None`` means the default for the current graph."""

    steps: int | None = None       # T: max chain steps per attempt
    length: int | None = None      # l: max path length before a random cut
    retries: int | None = None     # attempts before the deterministic fallback
    cdensity: float = DEFAULT_CDENSITY

    def resolve(self, n: int, delta: int) -> tuple[int, int, int]:
        lg = _log2ceil(n)
        t = self.steps if self.steps is not None else 2 * lg
        ln = self.length if self.length is not None else 1 + 18 * (delta + 1) ** 6 * lg
        r = self.retries if self.retries is not None else math.ceil((self.cdensity + 1) * math.log2(max(n, 2)))
        return t, ln, max(r, 1)


@dataclass
class UpdateStats:
    op: str
    u: int
    v: int
    uncoloured: int = 0    # edges uncoloured by a delete before recolouring
    recoloured: int = 0    # edges whose colour changed during the update
    attempts: int = 0
    steps: int = 0
    fallbacks: int = 0
    max_colour: int = 0
    delta: int = 0
    ceiling: int = 0   # ceil((1+eps) Delta) after the update


@dataclass
class Totals:
    colour_calls: int = 0
    attempts: int = 0
    successes: int = 0
    fallbacks: int = 0
    palette_failures: int = 0
    overlap_aborts: int = 0
    step_aborts: int = 0
    cuts: int = 0
    steps_hist: dict[int, int] = field(default_factory=dict)


class DynamicColourer:
    """Maintains a proper colouring with every colour at most ``ceil((1+eps) Delta)``.

    ``on_commit`` callbacks receive each committed :class:`MultiStepChain`.
    With ``check=True`` every update ends with a full recount of the slack
    bound and the light queues (slow; meant for tests).
    """

    def __init__(self, n: int, eps="1/2", seed: int | None = None,
                 params: Params | None = None, rng: random.Random | None = None, check: bool = False):
        self.g = Graph(n)
        self.eps = as_fraction(eps)
        self.rng = rng if rng is not None else random.Random(seed)
        self.params = params or Params()
        self.check = check
        self.on_commit: list = []
        self.totals = Totals()
        self._heavy: dict[int, int] = {}
        self._light: dict[int, dict[int, None]] = {}
        self._ncol: dict[int, int] = {}
        self._cls: dict[int, tuple[int, EdgeClass]] = {}
        self.recourse_bound = 1 + 2 * (math.ceil(self.eps) + 1)

    # -- bookkeeping -------------------------------------------------------------

    def ceiling(self, v: int) -> int:
        return eps_ceiling(self.eps, self.g.degree(v))

    def _classify(self, e: int, k: int) -> EdgeClass:
        x, y = self.g.ends(e)
        inside = (k <= self.ceiling(x)) + (k <= self.ceiling(y))
        return (EdgeClass.LIGHT, EdgeClass.NEUTRAL, EdgeClass.HEAVY)[inside]

    def classify_edge(self, e: int) -> EdgeClass:
        k = self.g.colour(e)
        if k == UNCOLOURED:
            raise ValueError(f"edge {e} is uncoloured")
        return self._classify(e, k)

    def _forget(self, e: int) -> None:
        old = self._cls.pop(e, None)
        if old is None:
            return
        k, cls = old
        self._ncol[k] -= 1
        if cls is EdgeClass.HEAVY:
            self._heavy[k] -= 1
        elif cls is EdgeClass.LIGHT:
            del self._light[k][e]

    def _account(self, e: int) -> None:
        """Bring the cached class of ``e`` in line with its colour and end degrees."""
        self._forget(e)
        if not self.g.has_edge(e):
            return
        k = self.g.colour(e)
        if k == UNCOLOURED:
            return
        cls = self._classify(e, k)
        self._cls[e] = (k, cls)
        self._ncol[k] = self._ncol.get(k, 0) + 1
        if cls is EdgeClass.HEAVY:
            self._heavy[k] = self._heavy.get(k, 0) + 1
        elif cls is EdgeClass.LIGHT:
            self._light.setdefault(k, {})[e] = None

    def _range_edges(self, x: int, c_lo: int, c_hi: int) -> list[int]:
        """Edges at ``x`` coloured in ``(c_lo, c_hi]``."""
        out = []
        for k in range(c_lo + 1, c_hi + 1):
            e = self.g.edge_with_colour_at(x, k)
            if e is not None:
                out.append(e)
        return out

    def invariant_slack(self, k: int) -> int:
        return self._heavy.get(k, 0) - len(self._light.get(k, ()))

    def light_edges(self, k: int) -> list[int]:
        return list(self._light.get(k, ()))

    def max_colour(self) -> int:
        return max((k for k, c in self._ncol.items() if c), default=0)

    @property
    def delta(self) -> int:
        return self.g.max_degree

    def colour_ceiling(self) -> int:
        return eps_ceiling(self.eps, self.g.max_degree)

    # -- updates -------------------------------------------------------------------

    def insert(self, u: int, v: int) -> UpdateStats:
        st = UpdateStats("+", u, v)
        c0 = (self.ceiling(u), self.ceiling(v))
        e = self.g.add_edge(u, v)
        for x, c in zip((u, v), c0):
            for f in self._range_edges(x, c, self.ceiling(x)):
                self._account(f)
        st.recoloured = self.colour(e, st)
        return self._finish(st)

    def delete(self, u: int, v: int) -> UpdateStats:
        st = UpdateStats("-", u, v)
        e = self.g.edge(u, v)
        if e is None:
            raise KeyError(f"no edge {u}-{v}")
        k = self.g.colour(e)
        affected = {k} if k else set()
        self._forget(e)
        c0 = (self.ceiling(u), self.ceiling(v))
        self.g.remove_edge(e)
        for x, c in zip((u, v), c0):
            for f in self._range_edges(x, self.ceiling(x), c):
                affected.add(self.g.colour(f))
                self._account(f)
        stack = []
        for kk in sorted(affected):
            while self.invariant_slack(kk) < 0:
                queue = self._light.get(kk)
                if not queue:
                    raise InvariantError(f"colour {kk} has negative slack but no light edge")
                f = next(iter(queue))
                self._forget(f)
                self.g.recolour(f, UNCOLOURED)
                stack.append(f)
        st.uncoloured = len(stack)
        if st.uncoloured > self.recourse_bound:
            raise InvariantError(f"delete uncoloured {st.uncoloured} > {self.recourse_bound} edges")
        changed = set(stack)
        while stack:
            f = stack.pop()
            changed |= self._colour_changes(f, st)
        st.recoloured = len(changed)
        return self._finish(st)

    def _finish(self, st: UpdateStats) -> UpdateStats:
        st.max_colour = self.max_colour()
        st.delta = self.g.max_degree
        st.ceiling = self.colour_ceiling()
        if self.check:
            self.self_check()
        return st

    # -- colouring one edge --------------------------------------------------------

    def colour(self, e: int, st: UpdateStats | None = None) -> int:
        """Colour the uncoloured edge ``e``; returns how many edges changed colour."""
        return len(self._colour_changes(e, st))

    def _colour_changes(self, e: int, st: UpdateStats | None) -> set[int]:
        if self.g.colour(e) != UNCOLOURED:
            raise ValueError(f"edge {e} is already coloured")
        t_cap, l_cap, retries = self.params.resolve(self.g.n, self.g.max_degree)
        tot = self.totals
        tot.colour_calls += 1
        for _ in range(retries):
            tot.attempts += 1
            if st is not None:
                st.attempts += 1
            result = self._attempt(e, t_cap, l_cap)
            if result is not None:
                tot.successes += 1
                return self._commit(*result, st)
        tot.fallbacks += 1
        if st is not None:
            st.fallbacks += 1
        log.debug("edge %d: %d attempts failed, using the deterministic chain", e, retries)
        ov = Overlay(self.g)
        ch = build_vizing_chain(ov, e, EpsLocal(self.eps))
        ms = MultiStepChain()
        ms.steps.append(ch.edges)
        ms.kappas.append(ch.kappa)
        ms.trace.append(shift_traced(ov, ch.edges, ch.final_colour))
        ms.status = ChainStatus.AUGMENTING
        return self._commit(ov, ms, st)

    def _attempt(self, e: int, t_cap: int, l_cap: int):
        tot = self.totals
        ov = Overlay(self.g)
        palette = sample_palette(self.g, self.eps, self.params.cdensity, self.rng)
        mode = EpsLocal(self.eps, palette.mask)
        ms = MultiStepChain()
        try:
            ch = build_vizing_chain(ov, e, mode, trunc=l_cap, rng=self.rng)
            while True:
                if ch.status is ChainStatus.OVERLAPPING:
                    tot.overlap_aborts += 1
                    return None
                if ch.status is ChainStatus.AUGMENTING:
                    if ms.overlaps(ch.edges):
                        tot.overlap_aborts += 1
                        return None
                    ms.steps.append(ch.edges)
                    ms.kappas.append(ch.kappa)
                    ms.trace.append(shift_traced(ov, ch.edges, ch.final_colour))
                    ms.status = ChainStatus.AUGMENTING
                    return ov, ms
                cut = ch.truncate(self.rng.randint(1, l_cap))
                if ms.overlaps(cut.edges):
                    tot.overlap_aborts += 1
                    return None
                ms.steps.append(cut.edges)
                ms.kappas.append(cut.kappa)
                ms.trace.append(shift_traced(ov, cut.edges))
                tot.cuts += 1
                if len(ms.steps) >= t_cap:
                    tot.step_aborts += 1
                    return None
                ch = extend_chain(ov, cut.last_edge, cut.end_vertex, cut.kappa, mode,
                                  rng=self.rng, trunc=l_cap)
        except PaletteFailure:
            tot.palette_failures += 1
            return None

    def _commit(self, ov: Overlay, ms: MultiStepChain, st: UpdateStats | None) -> set[int]:
        changed = ov.commit()
        for f in changed:
            self._account(f)
        n_steps = len(ms.steps)
        self.totals.steps_hist[n_steps] = self.totals.steps_hist.get(n_steps, 0) + 1
        if st is not None:
            st.steps += n_steps
        for cb in self.on_commit:
            cb(ms)
        return set(changed)

    # -- self check -------------------------------------------------------------------

    def recount_slack(self) -> dict[int, int]:
        """Slack of every colour recomputed from scratch (independent of the caches)."""
        g = self.g
        lhs: dict[int, int] = {}
        for e in g.edges():
            k = g.colour(e)
            if k:
                lhs[k] = lhs.get(k, 0) + 1
        rhs: dict[int, int] = {}
        for v in range(g.n):
            for k in mask_colours(g.used(v)):
                if k <= self.ceiling(v):
                    rhs[k] = rhs.get(k, 0) + 1
        return {k: rhs.get(k, 0) - lhs.get(k, 0) for k in set(lhs) | set(rhs)}

    def self_check(self) -> None:
        for k, s in self.recount_slack().items():
            if s < 0:
                raise InvariantError(f"colour {k} has slack {s}")
            if s != self.invariant_slack(k):
                raise InvariantError(f"cached slack of colour {k} is {self.invariant_slack(k)}, recount {s}")
        want: dict[int, set[int]] = {}
        for e in self.g.edges():
            k = self.g.colour(e)
            if k and self._classify(e, k) is EdgeClass.LIGHT:
                want.setdefault(k, set()).add(e)
        for k in set(want) | set(self._light):
            if set(self._light.get(k, ())) != want.get(k, set()):
                raise InvariantError(f"light queue of colour {k} out of date")
        top = self.colour_ceiling()
        if self.max_colour() > top:
            raise InvariantError(f"colour {self.max_colour()} exceeds ceil((1+eps) Delta) = {top}")
