"""Command-line front end: ``sinrbatch run | gen | bench``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import statistics
import sys
import time
from fractions import Fraction

import numpy as np

from .algebra.backend import EXACT, get_backend
from .engine import (
    QuerySet,
    approx_batch_2d,
    batch_1d_uniform,
    batch_1d_weighted,
    batch_grid_rx,
    batch_grid_tx,
    choose_k,
    oracle_batch,
)
from .engine.model import PtasConfig, VerdictKind
from .errors import EngineMismatch, InvalidEps, QueryOnTransmitter, ScenarioError
from .scenario_file import decimal_str, generate, load_scenario, parse_scenario, to_json

ENGINES = ("oracle", "1d-uniform", "1d-weighted", "grid-tx", "grid-rx", "approx", "ptas")
FIELDS = ("index", "x", "y", "engine", "candidate", "quantity", "verdict", "flags")

EXIT_OK, EXIT_SCENARIO, EXIT_MISMATCH, EXIT_ORACLE = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get("SINRBATCH_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(EXIT_SCENARIO, f"SINRBATCH_THREADS must be an integer, got {env!r}")
    return None


def run_engine(engine, scenario, queries, backend, eps=Fraction(1, 10), threads=None):
    """Dispatch one engine by CLI name; returns its EngineReport."""
    if engine == "oracle":
        return oracle_batch(scenario, queries, backend)
    if engine in ("1d-uniform", "1d-weighted"):
        if scenario.dimension != 1:
            raise EngineMismatch(f"{engine} needs a 1-D scenario")
        fn = batch_1d_uniform if engine == "1d-uniform" else batch_1d_weighted
        return fn(scenario, queries, backend, threads)
    if engine == "grid-tx":
        return batch_grid_tx(scenario, queries, backend, threads)
    if engine == "grid-rx":
        if queries.grid is None:
            raise EngineMismatch("grid-rx needs receivers given as a grid")
        return batch_grid_rx(scenario, queries, backend=backend, threads=threads)
    if engine in ("approx", "ptas"):
        config = PtasConfig.for_k(4, scenario.alpha) if engine == "approx" else choose_k(eps, scenario.alpha)
        source = "euclidean" if scenario.uniform_power else "weighted"
        return approx_batch_2d(scenario, queries, config, source, backend, threads)
    raise CliError(EXIT_SCENARIO, f"unknown engine {engine!r}")


def _quantity(q):
    if q is None:
        return ""
    return repr(float(q))


def records(report, queries):
    for r, (p, (c, q, v, fl)) in enumerate(zip(queries.points, report.records())):
        yield {
            "index": r,
            "x": decimal_str(p[0]),
            "y": decimal_str(p[1]) if len(p) > 1 else "",
            "engine": report.engine,
            "candidate": "" if c is None else int(c),
            "quantity": _quantity(q),
            "verdict": "rejected" if v is None else str(v),
            "flags": list(fl),
        }


def write_records(report, queries, fmt, out):
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(FIELDS)
        for rec in records(report, queries):
            w.writerow([rec[f] if f != "flags" else ";".join(rec[f]) for f in FIELDS])
    else:
        for rec in records(report, queries):
            out.write(json.dumps(rec, separators=(",", ":")) + "\n")


def oracle_diff(report, oracle_verdicts):
    """(receiver, verdict, oracle verdict) wherever a definite verdict is unsound."""
    bad = []
    for r, v in enumerate(report.verdicts):
        o = oracle_verdicts[r]
        if v is None or o is None or not v.definite:
            continue
        if v.kind is VerdictKind.HEAR and not (o.kind is VerdictKind.HEAR and o.tx == v.tx):
            bad.append((r, v, o))
        elif v.kind is VerdictKind.SILENT and o.kind is not VerdictKind.SILENT:
            bad.append((r, v, o))
    return bad


def _meta_lines(meta):
    for key, val in meta.items():
        if key == "timings":
            for tk, tv in val.items():
                yield f"time_{tk}={tv:.6f}"
        elif key in ("gamma", "gamma_exact") and isinstance(val, float):
            yield f"{key}={val:.6g}"
        else:
            yield f"{key}={val}"


def cmd_run(args):
    threads = _threads(args.threads)
    backend = get_backend(args.backend)
    try:
        eps = Fraction(args.eps)
    except ValueError:
        raise CliError(EXIT_SCENARIO, f"--eps must be a decimal, got {args.eps!r}")
    try:
        scenario, queries = load_scenario(args.scenario)
        if not (args.engine == "grid-rx" and queries.grid is not None):
            queries.validate(scenario)
        elif queries.dimension != scenario.dimension:
            raise ScenarioError("receiver and transmitter dimensions differ")
    except QueryOnTransmitter as exc:
        raise CliError(EXIT_SCENARIO, f"malformed scenario: receiver {exc.receiver} "
                       f"coincides with transmitter {exc.transmitter}")
    except ScenarioError as exc:
        raise CliError(EXIT_SCENARIO, f"malformed scenario: {exc}")
    try:
        report = run_engine(args.engine, scenario, queries, backend, eps, threads)
    except EngineMismatch as exc:
        raise CliError(EXIT_MISMATCH, f"engine/scenario mismatch: {exc}")
    except InvalidEps as exc:
        raise CliError(EXIT_SCENARIO, str(exc))
    for line in _meta_lines(report.meta):
        print(f"# {line}", file=sys.stderr)
    if args.seed is not None:
        print(f"# seed={args.seed}", file=sys.stderr)
    write_records(report, queries, args.out, sys.stdout)
    sys.stdout.flush()
    if args.check_oracle:
        # rejected grid entries have no oracle value
        live = [r for r, v in enumerate(report.verdicts) if v is not None]
        sub = QuerySet([queries.points[r] for r in live], dimension=scenario.dimension)
        full = [None] * len(queries)
        for r, v in zip(live, oracle_batch(scenario, sub, EXACT).verdicts):
            full[r] = v
        bad = oracle_diff(report, full)
        if bad:
            print(f"oracle check failed on {len(bad)} receiver(s):", file=sys.stderr)
            for r, v, o in bad:
                print(f"  receiver {r}: engine {v} ({v.tx}) vs oracle {o} ({o.tx})", file=sys.stderr)
            return EXIT_ORACLE
        print("# oracle check passed", file=sys.stderr)
    return EXIT_OK


def cmd_gen(args):
    try:
        doc = generate(args.n, args.m, args.dim, args.power, args.layout, args.seed, args.min_sep,
                       args.alpha, args.beta, args.noise)
        parse_scenario(json.loads(to_json(doc)))
    except ScenarioError as exc:
        raise CliError(EXIT_SCENARIO, str(exc))
    sys.stdout.write(to_json(doc))
    return EXIT_OK


def parse_sizes(text):
    """'1024,4096' or the doubling range '1024..32768'."""
    text = text.strip()
    if ".." in text:
        lo, hi = (int(v) for v in text.split(".."))
        if lo < 1 or hi < lo:
            raise CliError(EXIT_SCENARIO, f"bad size range {text!r}")
        out = []
        v = lo
        while v <= hi:
            out.append(v)
            v *= 2
        return out
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CliError(EXIT_SCENARIO, f"bad size list {text!r}")


def bench_instance(engine, n, seed):
    """(scenario, queries) of size about n x n suited to ``engine``."""
    sep = min(1e-3, 0.05 / (2 * n))
    if engine in ("1d-uniform", "1d-weighted") or (engine == "oracle"):
        power = "random" if engine == "1d-weighted" else "uniform"
        doc = generate(n, n, 1, power, "random", seed, repr(sep), digits=9)
    elif engine == "grid-tx":
        side = max(1, math.isqrt(n))
        doc = generate(side * side, n, 2, "uniform", "grid-tx", seed, repr(sep), digits=9)
    elif engine == "grid-rx":
        side = max(1, math.isqrt(n))
        doc = generate(n, side, 2, "uniform", "grid-rx", seed, repr(sep), digits=9)
    else:
        doc = generate(n, n, 2, "uniform", "random", seed, repr(sep), digits=9, beta="5")
    return parse_scenario(doc)


def loglog_slope(ns, ts):
    if len(ns) < 2:
        return None
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(ts, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def bench(engine, sizes, reps=3, backend="exact", seed=0, eps=Fraction(1, 10), threads=None):
    """Rows (engine, n, m, backend, median seconds) plus the log-log slope over sizes."""
    be = get_backend(backend)
    rows = []
    for i, n in enumerate(sizes):
        scenario, queries = bench_instance(engine, n, seed + i)
        times = []
        for _ in range(max(1, reps)):
            t0 = time.perf_counter()
            run_engine(engine, scenario, queries, be, eps, threads)
            times.append(time.perf_counter() - t0)
        rows.append((engine, scenario.n, len(queries), be.name, statistics.median(times)))
    slope = loglog_slope([r[1] + r[2] for r in rows], [r[4] for r in rows])
    return rows, slope


def cmd_bench(args):
    if args.engine not in ENGINES:
        raise CliError(EXIT_SCENARIO, f"unknown engine {args.engine!r}")
    sizes = parse_sizes(args.sizes)
    try:
        rows, slope = bench(args.engine, sizes, args.reps, args.backend, args.seed or 0,
                            Fraction(args.eps), _threads(args.threads))
    except EngineMismatch as exc:
        raise CliError(EXIT_MISMATCH, str(exc))
    except ScenarioError as exc:
        raise CliError(EXIT_SCENARIO, str(exc))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(("engine", "n", "m", "backend", "median_seconds", "slope"))
    for eng, n, m, be, t in rows:
        w.writerow((eng, n, m, be, f"{t:.6f}", "" if slope is None else f"{slope:.4f}"))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="sinrbatch", description="Batched SINR point location.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="answer every receiver of a scenario file")
    r.add_argument("--engine", choices=ENGINES, required=True)
    r.add_argument("--scenario", required=True, help="ScenarioFile JSON path")
    r.add_argument("--eps", default="0.1", help="PTAS accuracy in (0, 1)")
    r.add_argument("--backend", choices=("exact", "f64"), default="exact")
    r.add_argument("--out", choices=("csv", "jsonl"), default="csv")
    r.add_argument("--check-oracle", action="store_true", help="diff definite verdicts against the oracle")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--threads", type=int, default=None)
    r.set_defaults(func=cmd_run)

    g = sub.add_parser("gen", help="write a random ScenarioFile to stdout")
    g.add_argument("--n", type=int, required=True, help="transmitters")
    g.add_argument("--m", type=int, default=None, help="receivers (grid side for grid-rx)")
    g.add_argument("--dim", type=int, choices=(1, 2), default=2)
    g.add_argument("--power", choices=("uniform", "random"), default="uniform")
    g.add_argument("--layout", choices=("random", "grid-tx", "grid-rx"), default="random")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--min-sep", default="0.001")
    g.add_argument("--alpha", type=int, default=2)
    g.add_argument("--beta", default="1.5")
    g.add_argument("--noise", default="0.01")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time an engine over a size sweep")
    b.add_argument("--engine", choices=ENGINES, required=True)
    b.add_argument("--sizes", default="1024..8192", help="list 'a,b,c' or doubling range 'a..b'")
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--backend", choices=("exact", "f64"), default="exact")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--eps", default="0.1")
    b.add_argument("--threads", type=int, default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "gen" and args.m is None:
        args.m = args.n
    try:
        return args.func(args)
    except CliError as exc:
        print(f"sinrbatch: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
