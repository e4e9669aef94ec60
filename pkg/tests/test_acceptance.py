"""End-to-end acceptance suite.

Each test checks one numbered criterion at its stated tolerance and records a
single ``criterion N: PASS|FAIL ...`` line, printed in the pytest summary
(and on stdout with ``-s``).  Heavy runs are shared through module-scoped
fixtures so criterion 11 can audit every chain committed by criteria 5-9.
"""
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from conftest import ACCEPTANCE_LINES
from vizchain.chains import eps_ceiling
from vizchain.cli import bench_table, census_instance
from vizchain.dynamic import DynamicColourer, Params
from vizchain.generators import complete, gnp, max_degree_graph, path, ramp_stream, random_stream, star
from vizchain.graph import Graph
from vizchain.palette import is_local_palette, sample_palette
from vizchain.strict_local import colour_arrays
from vizchain.verify import (
    check_invariant61,
    check_non_overlapping,
    check_proper,
    check_proper_arrays,
    check_strict_local_arrays,
    check_uncoloured_arrays,
)

EPSILONS = ("1/10", "1/2", "1")


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


class ChainAudit:
    """``on_commit`` hook: checks every committed multi-step chain for overlaps."""

    def __init__(self):
        self.chains = 0
        self.multi = 0
        self.faults = []

    def __call__(self, ms):
        self.chains += 1
        self.multi += len(ms.steps) > 1
        self.faults += check_non_overlapping(ms)


AUDITS: dict[str, ChainAudit] = {}


def audited(dc, name):
    audit = AUDITS.setdefault(name, ChainAudit())
    dc.on_commit.append(audit)
    return dc


# -- criteria 1-3: strictly local static colouring ----------------------------------

def static_instances():
    for n in (100, 500, 1000):
        for p in (0.01, 0.05, 0.2):
            for seed in range(100):
                yield f"gnp({n},{p})", gnp(n, p, np.random.default_rng([n, int(p * 100), seed]))
    for n in range(2, 61):
        yield "complete", complete(n)
    for n in range(2, 102):
        yield "star", star(n)
        yield "path", path(n)


@pytest.fixture(scope="module")
def static_suite():
    from vizchain.strict_local import PotentialError

    colour_arrays(3, np.array([0, 1]), np.array([1, 2]))  # compile before timing
    out = {"instances": 0, "violations": 0, "cuts": 0, "chains": 0, "phi_errors": [],
           "phi_over": 0, "phi_max_ratio": 0.0}
    t0 = time.perf_counter()
    for _, (n, eu, ev) in static_instances():
        out["instances"] += 1
        try:
            col, st = colour_arrays(n, eu, ev, check_potential=True)
        except PotentialError as exc:
            out["phi_errors"].append(str(exc))
            continue
        out["violations"] += len(check_uncoloured_arrays(eu, ev, col) + check_proper_arrays(n, eu, ev, col)
                                 + check_strict_local_arrays(n, eu, ev, col))
        out["cuts"] += st.truncated
        out["chains"] += st.chains
        if st.phi_max > st.phi_bound:
            out["phi_over"] += 1
        if st.phi_bound:
            out["phi_max_ratio"] = max(out["phi_max_ratio"], st.phi_max / st.phi_bound)
    out["seconds"] = time.perf_counter() - t0
    return out


def test_criterion_01_strictly_local_colouring(static_suite):
    s = static_suite
    ok = s["violations"] == 0 and not s["phi_errors"] and s["seconds"] < 60
    record(1, ok, f"{s['instances']} instances, {s['violations']} violations, {s['seconds']:.1f}s (< 60s)")
    assert ok


def test_criterion_02_potential_monotone(static_suite):
    s = static_suite
    ok = not s["phi_errors"] and s["cuts"] > 0
    record(2, ok, f"{s['chains']} chains incl. {s['cuts']} cut shifts checked, "
                  f"{len(s['phi_errors'])} potential assertion failures")
    assert ok, s["phi_errors"][:3]


def test_criterion_03_potential_bound(static_suite):
    s = static_suite
    ok = s["phi_over"] == 0 and not s["phi_errors"]
    record(3, ok, f"max phi / n(Delta+1) = {s['phi_max_ratio']:.3f} over {s['instances']} instances")
    assert ok


# -- criterion 4: scaling -------------------------------------------------------------

def test_criterion_04_doubling_growth():
    rows = bench_table("strict-local", "fast", [2000, 4000, 8000, 16000, 32000], repeats=5,
                       avg_degree=10, seed=0)
    ratios = [r["ratio"] for r in rows[1:]]
    ok = all(r <= 5 for r in ratios)
    record(4, ok, "time ratio per doubling " + ", ".join(f"{r:.2f}" for r in ratios) + " (<= 5)")
    assert ok


# -- criterion 5: random streams ---------------------------------------------------

@pytest.fixture(scope="module")
def stress_runs():
    results = []
    for n in (100, 1000):
        for eps in EPSILONS:
            dc = audited(DynamicColourer(n, eps=eps, seed=n), "random streams")
            faults, checks, worst, deletes = 0, 0, 0, 0
            over_bound = 0
            t0 = time.perf_counter()
            for i, (op, u, v) in enumerate(random_stream(n, 100_000, random.Random(n + 7)), start=1):
                if op == "+":
                    dc.insert(u, v)
                else:
                    st = dc.delete(u, v)
                    deletes += 1
                    worst = max(worst, st.uncoloured)
                    over_bound += st.uncoloured > dc.recourse_bound
                if i % 100 == 0:
                    checks += 1
                    faults += len(check_proper(dc.g)) + len(check_invariant61(dc.g, dc.eps))
                    faults += sum(1 for e in dc.g.edges() if not dc.g.colour(e))
            results.append({"n": n, "eps": eps, "faults": faults, "checks": checks,
                            "seconds": time.perf_counter() - t0, "worst": worst, "deletes": deletes,
                            "over_bound": over_bound, "bound": dc.recourse_bound})
    return results


def test_criterion_05_dynamic_invariant(stress_runs):
    ok = all(r["faults"] == 0 and r["seconds"] < 300 for r in stress_runs)
    parts = [f"n={r['n']} eps={r['eps']}: {r['faults']} violations/{r['checks']} checks {r['seconds']:.0f}s"
             for r in stress_runs]
    record(5, ok, "; ".join(parts))
    assert ok


# -- criterion 6: ramp ------------------------------------------------------------------

@pytest.fixture(scope="module")
def ramp_runs():
    results = []
    for eps in EPSILONS:
        dc = audited(DynamicColourer(1000, eps=eps, seed=3), "ramp streams")
        bad, peak, worst, deletes, over_bound = 0, 0, 0, 0, 0
        final = None
        for op, u, v in ramp_stream(1000, random.Random(3), hub_degree=200, low=10):
            if op == "+":
                dc.insert(u, v)
            else:
                st = dc.delete(u, v)
                deletes += 1
                worst = max(worst, st.uncoloured)
                over_bound += st.uncoloured > dc.recourse_bound
            top = eps_ceiling(dc.eps, dc.g.max_degree)
            # literal scan of every coloured edge, independent of the colourer's counters
            biggest = max((dc.g.colour(e) for e in dc.g.edges()), default=0)
            bad += biggest > top
            peak = max(peak, biggest)
            final = (biggest, top, dc.g.max_degree)
        results.append({"n": 1000, "eps": eps, "bad": bad, "peak": peak, "final": final, "worst": worst,
                        "deletes": deletes, "over_bound": over_bound, "bound": dc.recourse_bound})
    return results


def test_criterion_06_adaptivity(ramp_runs):
    ok = all(r["bad"] == 0 for r in ramp_runs)
    parts = [f"eps={r['eps']}: peak {r['peak']}, final {r['final'][0]} <= {r['final'][1]} (Delta={r['final'][2]})"
             for r in ramp_runs]
    record(6, ok, "; ".join(parts))
    assert ok


# -- criterion 7: recourse over every delete of criteria 5 and 6 ---------------------

def test_criterion_07_recourse(stress_runs, ramp_runs):
    runs = stress_runs + ramp_runs
    ok = all(r["over_bound"] == 0 for r in runs)
    parts = [f"eps={r['eps']}: max {r['worst']} <= {r['bound']}" for r in stress_runs if r["n"] == 1000]
    total = sum(r["deletes"] for r in runs)
    record(7, ok, f"{total} deletes; " + "; ".join(parts))
    assert ok


# -- criterion 8: palettes ----------------------------------------------------------------

def test_criterion_08_palette_validity():
    n, eps, trials = 1000, Fraction(1), 10_000
    rng = random.Random(8)
    graphs = []
    for seed in range(10):
        _, eu, ev = gnp(n, 0.05, np.random.default_rng(800 + seed))
        g = Graph.from_edges(n, zip(eu.tolist(), ev.tolist()))

        def ceiling(e, g=g):
            a, b = g.ends(e)
            return min(eps_ceiling(eps, g.degree(a)), eps_ceiling(eps, g.degree(b)))

        oracles.greedy_partial(g, rng, ceiling)
        graphs.append(g)
    failures = 0
    for i in range(trials):
        g = graphs[i % len(graphs)]
        failures += not is_local_palette(sample_palette(g, eps, 8, rng), g, eps)[0]
    frac = failures / trials
    ok = frac <= 10 / n
    record(8, ok, f"{failures}/{trials} non-local palettes, fraction {frac:.4g} <= {10 / n:.4g}")
    assert ok


# -- criterion 9: success probability ---------------------------------------------------

@pytest.fixture(scope="module")
def success_runs():
    out = {}
    # short paths force random cuts and multi-step chains
    rng = random.Random(9)
    dc = audited(DynamicColourer(16, eps="1/10", seed=9, params=Params(length=1)), "short-length runs")
    for op, u, v in random_stream(16, 3000, rng, warmup=100):
        dc.insert(u, v) if op == "+" else dc.delete(u, v)
    out["short"] = dc.totals
    out["short_faults"] = len(check_proper(dc.g)) + len(check_invariant61(dc.g, dc.eps))
    # default lengths and step caps: count first-attempt outcomes over 1000 colour calls
    dc = audited(DynamicColourer(200, eps="1/10", seed=19), "default-parameter runs")
    for op, u, v in random_stream(200, 100_000, random.Random(19), warmup=2000):
        dc.insert(u, v) if op == "+" else dc.delete(u, v)
        if dc.totals.attempts >= 1000:
            break
    out["default"] = dc.totals
    return out


def test_criterion_09_success_probability(success_runs):
    short, default = success_runs["short"], success_runs["default"]
    freq = default.successes / default.attempts
    short_freq = short.successes / short.attempts
    ok = (freq >= 0.5 and default.attempts >= 1000 and short.cuts > 0
          and short.steps_hist.keys() - {1} and success_runs["short_faults"] == 0)
    record(9, ok, f"default parameters: {default.successes}/{default.attempts} attempts succeed ({freq:.3f} >= 0.5); "
                  f"l=1: {short.cuts} cuts, {sum(c for s, c in short.steps_hist.items() if s > 1)} multi-step "
                  f"commits, per-attempt success {short_freq:.3f}, {short.fallbacks} fallbacks")
    assert ok


# -- criterion 10: census ---------------------------------------------------------------

def test_criterion_10_packing_bound():
    rng = random.Random(10)
    worst_ratio, worst_density, breaches, families = 0.0, 0.0, 0, 0
    for i in range(500):
        n = rng.randint(10, 40)
        _, eu, ev = max_degree_graph(n, 5, np.random.default_rng(1000 + i))
        g, reports = census_instance(n, eu, ev, rng, families=4, uncolour=0.2 if i % 2 else 0.0)
        for r in reports:
            families += 1
            breaches += len(r.violations())
            if r.delta:
                worst_ratio = max(worst_ratio, r.max_membership / r.bound)
                worst_density = max(worst_density, r.density / (r.delta / 2))
    ok = breaches == 0
    record(10, ok, f"{families} families on 500 instances: max membership / 4Delta^2 = {worst_ratio:.3f}, "
                   f"max density / (Delta/2) = {worst_density:.3f}")
    assert ok


# -- criterion 11: chain legality -------------------------------------------------------

def test_criterion_11_chain_legality(stress_runs, ramp_runs, success_runs):
    total = sum(a.chains for a in AUDITS.values())
    multi = sum(a.multi for a in AUDITS.values())
    faults = [f for a in AUDITS.values() for f in a.faults]
    ok = not faults and total > 0 and multi > 0
    record(11, ok, f"{total} committed chains ({multi} multi-step) audited, {len(faults)} overlaps")
    assert ok, [f.line() for f in faults[:5]]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
