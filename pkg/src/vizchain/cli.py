"""Command-line front end.

    vizchain color    colour a graph (strictly local or plain Delta+1)
    vizchain dynamic  replay an update stream through the dynamic colourer
    vizchain verify   check a colouring file against a graph file
    vizchain census   count chain overlaps on small random instances
    vizchain gen      write a generated graph or update stream
    vizchain bench    doubling-size timing table

Exit status: 0 when every check passed, 1 on a verification violation,
2 on bad usage or unreadable input.  Set VIZCHAIN_LOG=DEBUG (or INFO, ...)
for log output on stderr.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import random
import statistics
import sys
import time

import numpy as np

from . import generators as gen
from .graph import GraphError, read_colouring, read_graph, write_colouring, write_graph

log = logging.getLogger("vizchain")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- output helpers ----------------------------------------------------------------

def emit(rows: list[dict], fmt: str, out=None) -> None:
    """Write ``rows`` as an aligned text table (or key/value list for one row) or as CSV."""
    out = out or sys.stdout
    if not rows:
        return
    keys = list(rows[0])
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return
    if len(rows) == 1:
        width = max(len(k) for k in keys)
        for k in keys:
            out.write(f"{k:<{width}}  {_fmt(rows[0][k])}\n")
        return
    cells = [[_fmt(r[k]) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    out.write("  ".join(k.rjust(w) for k, w in zip(keys, widths)) + "\n")
    for c in cells:
        out.write("  ".join(x.rjust(w) for x, w in zip(c, widths)) + "\n")


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _print_violations(violations, limit: int = 50) -> None:
    for v in violations[:limit]:
        print(v.line())
    if len(violations) > limit:
        print(f"... {len(violations) - limit} more violations")


def _load_instance(args):
    """``(n, eu, ev)`` from a graph file or ``--gen`` tokens."""
    if bool(args.graph) == bool(args.gen):
        raise UsageError("give exactly one of a graph file or --gen")
    if args.graph:
        return gen.graph_arrays(read_graph(args.graph))
    try:
        return gen.from_spec(args.gen, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- color ------------------------------------------------------------------------

def cmd_color(args) -> int:
    from .strict_local import colour_arrays, colour_graph, colour_graph_plain
    from .verify import check_proper_arrays, check_strict_local_arrays, check_uncoloured_arrays

    n, eu, ev = _load_instance(args)
    delta = int(np.bincount(np.concatenate([eu, ev]), minlength=n).max()) if len(eu) else 0
    stats = None
    t0 = time.perf_counter()
    if args.mode == "strict-local" and args.engine == "fast":
        col, stats = colour_arrays(n, eu, ev, check_potential=not args.no_phi_check)
    else:
        g = gen.to_graph(n, eu, ev)
        if args.mode == "strict-local":
            stats = colour_graph(g, check_potential=not args.no_phi_check)
        else:
            colour_graph_plain(g)
        col = np.array([g.colour(e) for e in range(len(eu))], dtype=np.int64)
    seconds = time.perf_counter() - t0

    violations = check_uncoloured_arrays(eu, ev, col) + check_proper_arrays(n, eu, ev, col)
    if args.mode == "strict-local":
        violations += check_strict_local_arrays(n, eu, ev, col)
    if args.out:
        write_colouring(args.out, enumerate(col.tolist()))
    row = {
        "mode": args.mode, "n": n, "m": len(eu), "delta": delta,
        "colours_used": int(np.unique(col[col > 0]).size),
        "max_colour": int(col.max()) if len(col) else 0,
        "seconds": round(seconds, 6),
    }
    if stats is not None:
        row.update(chains=stats.chains, truncated=stats.truncated, phi_initial=stats.phi_initial,
                   phi_max=stats.phi_max, phi_final=stats.phi, phi_bound=stats.phi_bound)
    row["violations"] = len(violations)
    emit([row], args.format)
    _print_violations(violations)
    return EXIT_VIOLATION if violations else EXIT_OK


# -- dynamic ----------------------------------------------------------------------

def _stream_updates(args):
    if bool(args.stream) == bool(args.gen_stream):
        raise UsageError("give exactly one of --stream or --gen-stream")
    if args.stream:
        return gen.read_stream(args.stream)
    kind, *rest = args.gen_stream
    rng = random.Random(args.seed)
    try:
        nums = [int(x) for x in rest]
        if kind == "random" and len(nums) == 2:
            ups = gen.random_stream(nums[0], nums[1], rng)
        elif kind == "ramp" and 1 <= len(nums) <= 3:
            ups = gen.ramp_stream(nums[0], rng, *nums[1:])
        else:
            raise ValueError
    except ValueError:
        raise UsageError("--gen-stream takes 'random N UPDATES' or 'ramp N [HUB [LOW]]'") from None
    return [(i, op, u, v) for i, (op, u, v) in enumerate(ups, start=1)]


def cmd_dynamic(args) -> int:
    from .dynamic import DynamicColourer, InvariantError, Params
    from .verify import check_invariant61, check_non_overlapping, check_proper

    updates = _stream_updates(args)
    n = args.n if args.n else 1 + max((max(u, v) for _, _, u, v in updates), default=1)
    params = Params(steps=args.steps, length=args.length, retries=args.retries, cdensity=args.cdensity)
    dc = DynamicColourer(n, args.eps, seed=args.seed, params=params)
    chain_faults = []
    dc.on_commit.append(lambda ms: chain_faults.extend(check_non_overlapping(ms)))

    per_update, max_colours, ceilings, deltas = [], [], [], []
    verify_faults = []
    adaptivity = 0
    checks = 0
    t0 = time.perf_counter()
    for i, (lineno, op, u, v) in enumerate(updates, start=1):
        try:
            st = dc.insert(u, v) if op == "+" else dc.delete(u, v)
        except (GraphError, KeyError, IndexError) as exc:
            where = f"{args.stream}:{lineno}" if args.stream else f"update {lineno}"
            raise UsageError(f"{where}: cannot apply '{op} {u} {v}': {exc}") from None
        except InvariantError as exc:
            print(f"Invariant61 edge={u}-{v} colour=- detail={exc}")
            return EXIT_VIOLATION
        if st.max_colour > st.ceiling:
            adaptivity += 1
        max_colours.append(st.max_colour)
        ceilings.append(st.ceiling)
        deltas.append(st.delta)
        if args.per_update:
            per_update.append({"update": i, "op": op, "u": u, "v": v, "recoloured": st.recoloured,
                               "uncoloured": st.uncoloured, "attempts": st.attempts, "steps": st.steps,
                               "max_colour": st.max_colour, "ceiling": st.ceiling, "delta": st.delta})
        if args.verify_every and i % args.verify_every == 0:
            checks += 1
            verify_faults += check_proper(dc.g) + check_invariant61(dc.g, dc.eps)
    seconds = time.perf_counter() - t0
    if args.verify_every:
        checks += 1
        verify_faults += check_proper(dc.g) + check_invariant61(dc.g, dc.eps)

    if per_update:
        emit(per_update, args.format)
    t = dc.totals
    deletes = sum(1 for _, op, _, _ in updates if op == "-")
    row = {
        "n": n, "eps": str(dc.eps), "updates": len(updates), "inserts": len(updates) - deletes,
        "deletes": deletes, "final_m": dc.g.m, "final_delta": dc.delta,
        "final_max_colour": dc.max_colour(), "final_ceiling": dc.colour_ceiling(),
        "adaptivity_violations": adaptivity, "recourse_bound": dc.recourse_bound,
        "colour_calls": t.colour_calls, "attempts": t.attempts, "fallbacks": t.fallbacks,
        "palette_failures": t.palette_failures, "cuts": t.cuts,
        "overlap_violations": len(chain_faults), "verify_checks": checks,
        "verify_violations": len(verify_faults), "seconds": round(seconds, 3),
    }
    emit([row], args.format)
    _print_violations(verify_faults + chain_faults)
    if args.plot:
        from .plotting import dynamic_figure

        dynamic_figure(args.plot, max_colours, ceilings, deltas)
    return EXIT_VIOLATION if (adaptivity or chain_faults or verify_faults) else EXIT_OK


# -- verify -----------------------------------------------------------------------

def cmd_verify(args) -> int:
    from .verify import ColouringView, Violation, check_invariant61, check_proper, check_strict_local

    g = read_graph(args.graph)
    colours = read_colouring(args.colouring)
    violations = []
    for e, k in sorted(colours.items()):
        if not g.has_edge(e):
            raise UsageError(f"{args.colouring}: unknown edge id {e}")
        if k < 0:
            raise UsageError(f"{args.colouring}: negative colour on edge {e}")
    g = ColouringView(g, colours)
    violations += check_proper(g)
    if args.complete:
        violations += [Violation("Properness", g.ends(e), 0, "edge left uncoloured")
                       for e in sorted(g.edges()) if not g.colour(e)]
    if args.strict_local:
        violations += check_strict_local(g)
    if args.eps is not None:
        violations += check_invariant61(g, args.eps)
    emit([{"n": g.n, "m": sum(1 for _ in g.edges()), "coloured": sum(1 for k in colours.values() if k),
           "violations": len(violations)}], args.format)
    _print_violations(violations, limit=len(violations))
    return EXIT_VIOLATION if violations else EXIT_OK


# -- census -----------------------------------------------------------------------

def greedy_partial_colouring(g, rng: random.Random, colours: int) -> None:
    """Colour edges in random order with a random colour free at both ends; stuck edges stay uncoloured."""
    from .graph import colour_mask, mask_colours

    full = colour_mask(colours)
    order = sorted(g.edges())
    rng.shuffle(order)
    for e in order:
        u, v = g.ends(e)
        free = mask_colours(full & ~g.used(u) & ~g.used(v))
        if free:
            g.recolour(e, free[rng.randrange(len(free))])


def census_instance(n: int, eu, ev, rng: random.Random, families: int = 4,
                    uncolour: float = 0.0, trunc: int | None = None):
    """Greedy random (Delta+1) partial colouring, optionally uncolour a further fraction,
    then census one smallest-choice family and ``families`` random ones."""
    from .graph import UNCOLOURED
    from .verify import census_one_step, one_step_family

    g = gen.to_graph(n, eu, ev)
    greedy_partial_colouring(g, rng, g.max_degree + 1)
    for e in sorted(g.edges()):
        if g.colour(e) and rng.random() < uncolour:
            g.recolour(e, UNCOLOURED)
    reports = [census_one_step(g, one_step_family(g, trunc=trunc))]
    for _ in range(families):
        reports.append(census_one_step(g, one_step_family(g, rng=rng, trunc=trunc)))
    return g, reports


def cmd_census(args) -> int:
    rows, violations = [], []
    rng = random.Random(args.seed)
    for i in range(args.instances):
        if args.graph:
            n, eu, ev = gen.graph_arrays(read_graph(args.graph))
        else:
            try:
                n, eu, ev = gen.from_spec(args.gen, seed=None if args.seed is None else args.seed + i)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        g, reports = census_instance(n, eu, ev, rng, args.families, args.uncolour, args.trunc)
        for r in reports:
            violations += r.violations()
        rows.append({
            "instance": i, "n": g.n, "m": g.m, "delta": g.max_degree,
            "families": len(reports), "max_chains": max(r.chains for r in reports),
            "max_membership": max(r.max_membership for r in reports), "bound_4delta2": reports[0].bound,
            "max_density": round(max(r.density for r in reports), 4), "half_delta": g.max_degree / 2,
        })
    emit(rows, args.format)
    _print_violations(violations)
    return EXIT_VIOLATION if violations else EXIT_OK


# -- gen --------------------------------------------------------------------------

def cmd_gen(args) -> int:
    kind, *rest = args.spec
    out = args.out or "/dev/stdout"
    if kind in ("stream-random", "stream-ramp"):
        args.gen_stream, args.stream = [kind.split("-")[1], *rest], None
        ups = _stream_updates(args)
        gen.write_stream(out, ((op, u, v) for _, op, u, v in ups))
        return EXIT_OK
    try:
        n, eu, ev = gen.from_spec(args.spec, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_graph(out, n, zip(eu.tolist(), ev.tolist()))
    return EXIT_OK


# -- bench ------------------------------------------------------------------------

def _time_once(mode: str, engine: str, n: int, eu, ev, seed: int) -> float:
    from .strict_local import colour_arrays, colour_graph, colour_graph_plain

    if mode == "dynamic":
        from .dynamic import DynamicColourer

        ups = list(gen.random_stream(n, 10 * n, random.Random(seed)))
        dc = DynamicColourer(n, "1/2", seed=seed)
        t0 = time.perf_counter()
        for op, u, v in ups:
            dc.insert(u, v) if op == "+" else dc.delete(u, v)
        return (time.perf_counter() - t0) / len(ups)
    if mode == "strict-local" and engine == "fast":
        t0 = time.perf_counter()
        colour_arrays(n, eu, ev, check_potential=False)
        return time.perf_counter() - t0
    g = gen.to_graph(n, eu, ev)
    t0 = time.perf_counter()
    if mode == "strict-local":
        colour_graph(g, check_potential=False)
    else:
        colour_graph_plain(g)
    return time.perf_counter() - t0


def bench_table(mode: str, engine: str, sizes: list[int], repeats: int, avg_degree: float,
                seed: int | None) -> list[dict]:
    """Median-of-``repeats`` time per size on G(n, avg_degree/n); each repeat draws a fresh graph."""
    if mode == "strict-local" and engine == "fast":
        from .strict_local import colour_arrays

        colour_arrays(3, np.array([0, 1]), np.array([1, 2]))  # compile outside the timed region
    ss = np.random.SeedSequence(seed)
    rows = []
    prev = None
    for n in sizes:
        times, ms, ds = [], [], []
        for child in ss.spawn(repeats):
            _, eu, ev = gen.gnp(n, min(1.0, avg_degree / max(n - 1, 1)), np.random.default_rng(child))
            ms.append(len(eu))
            ds.append(int(np.bincount(np.concatenate([eu, ev]), minlength=n).max()) if len(eu) else 0)
            times.append(_time_once(mode, engine, n, eu, ev, int(child.generate_state(1)[0])))
        med = statistics.median(times)
        rows.append({"n": n, "m_median": int(statistics.median(ms)), "delta_max": max(ds),
                     "median_s": med, "ratio": round(med / prev, 3) if prev else ""})
        prev = med
    return rows


def cmd_bench(args) -> int:
    try:
        sizes = [int(x) for x in args.sizes.split(",")]
    except ValueError:
        raise UsageError("--sizes takes a comma-separated list of integers") from None
    rows = bench_table(args.mode, args.engine, sizes, args.repeats, args.avg_degree, args.seed)
    emit(rows, args.format)
    if args.plot:
        from .plotting import scaling_figure

        scaling_figure(args.plot, sizes, [r["median_s"] for r in rows], label=args.mode)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def _positive_int(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _eps(s: str) -> str:
    from .palette import as_fraction

    try:
        as_fraction(float(s) if "/" not in s else s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"eps must be a number in (0, 1], got {s}") from None
    return s if "/" in s else str(float(s))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vizchain", description="Vizing-chain edge colouring toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("graph", nargs="?", help="graph file ('n m' header, then 'u v' lines)")
            sp.add_argument("--gen", nargs="+", metavar="TOK",
                            help="generate instead: gnp N P | regular N D | maxdeg N D | star N | path N | complete N")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--format", choices=("text", "csv"), default="text")

    c = sub.add_parser("color", help="colour a static graph")
    common(c)
    c.add_argument("--mode", choices=("strict-local", "plain"), default="strict-local")
    c.add_argument("--engine", choices=("fast", "reference"), default="fast",
                   help="compiled or pure-Python strictly-local colourer (plain mode is always reference)")
    c.add_argument("--out", help="write 'edgeid colour' lines here")
    c.add_argument("--no-phi-check", action="store_true", help="skip the potential assertions")
    c.set_defaults(func=cmd_color)

    d = sub.add_parser("dynamic", help="replay an update stream")
    common(d, instance=False)
    d.add_argument("--stream", help="file of '+ u v' / '- u v' lines")
    d.add_argument("--gen-stream", nargs="+", metavar="TOK", help="random N UPDATES | ramp N [HUB [LOW]]")
    d.add_argument("--n", type=_positive_int, help="vertex count (default: largest id in the stream + 1)")
    d.add_argument("--eps", type=_eps, default="0.5")
    d.add_argument("--verify-every", type=_positive_int, default=None, metavar="K")
    d.add_argument("--steps", type=_positive_int, help="T: chain steps per attempt")
    d.add_argument("--length", type=_positive_int, help="l: path length before a random cut")
    d.add_argument("--retries", type=_positive_int, help="attempts before the deterministic fallback")
    d.add_argument("--cdensity", type=float, default=8.0)
    d.add_argument("--per-update", action="store_true", help="print one row per update")
    d.add_argument("--plot", help="write a max-colour figure (png/pdf/svg)")
    d.set_defaults(func=cmd_dynamic)

    v = sub.add_parser("verify", help="check a colouring")
    v.add_argument("graph")
    v.add_argument("colouring")
    v.add_argument("--strict-local", action="store_true")
    v.add_argument("--complete", action="store_true", help="also flag uncoloured edges")
    v.add_argument("--eps", type=_eps, default=None, help="check the dynamic counting bound for this eps")
    v.add_argument("--format", choices=("text", "csv"), default="text")
    v.set_defaults(func=cmd_verify)

    cs = sub.add_parser("census", help="chain-membership census on partially coloured instances")
    common(cs)
    cs.add_argument("--instances", type=_positive_int, default=1)
    cs.add_argument("--families", type=int, default=4, help="random chain families per instance")
    cs.add_argument("--uncolour", type=float, default=0.0,
                    help="extra fraction of coloured edges to uncolour after the greedy pass")
    cs.add_argument("--trunc", type=_positive_int, default=None, help="cut chain paths at this length")
    cs.set_defaults(func=cmd_census)

    g = sub.add_parser("gen", help="write a generated graph or stream")
    g.add_argument("spec", nargs="+",
                   help="gnp N P | regular N D | maxdeg N D | star N | path N | complete N | "
                        "stream-random N UPDATES | stream-ramp N [HUB [LOW]]")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="doubling-size timing table on G(n, d/n)")
    b.add_argument("--mode", choices=("strict-local", "plain", "dynamic"), default="strict-local")
    b.add_argument("--engine", choices=("fast", "reference"), default="fast")
    b.add_argument("--sizes", default="1000,2000,4000,8000")
    b.add_argument("--repeats", type=_positive_int, default=5)
    b.add_argument("--avg-degree", type=float, default=10.0)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--format", choices=("text", "csv"), default="text")
    b.add_argument("--plot", help="write a log-log scaling figure")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("VIZCHAIN_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"vizchain: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, OSError) as exc:
        print(f"vizchain: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
