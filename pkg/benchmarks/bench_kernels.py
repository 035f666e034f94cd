"""Compiled kernels versus the numpy fallback, per kernel and end to end.

    python benchmarks/bench_kernels.py [--reps 5] [--sizes 256,1024,4096]

Prints CSV rows: target, size, impl, median_seconds, speedup (fallback / compiled).
"""

import argparse
import contextlib
import csv
import statistics
import sys
import time

import numpy as np

from sinrbatch import _pykernels, kernels
from sinrbatch.algebra.backend import FLOAT64
from sinrbatch.cli import bench_instance
from sinrbatch.engine import batch_1d_uniform, oracle_batch

try:
    from sinrbatch import _ckernels
except ImportError:
    _ckernels = None

NAMES = ("fdivmod_monic", "fhorner_many", "sinr_scan", "pair_direct")


@contextlib.contextmanager
def using(impl):
    saved = {k: getattr(kernels, k) for k in NAMES}
    for k in NAMES:
        setattr(kernels, k, getattr(impl, k))
    try:
        yield
    finally:
        for k, v in saved.items():
            setattr(kernels, k, v)


def timeit(fn, reps):
    ts = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts)


def cases(n, rng):
    a = rng.standard_normal(2 * n)
    m = np.append(0.01 * rng.standard_normal(n), 1.0)
    xs = rng.random(n)
    sx, sy, p = rng.random(n), rng.random(n), np.ones(n)
    qx, qy = rng.random(n), rng.random(n)
    ts, tq = rng.random(64), rng.random(n) + 2.0
    ps = np.ones(64)
    return {
        "fdivmod_monic": lambda k: k.fdivmod_monic(a, m),
        "fhorner_many": lambda k: k.fhorner_many(a, xs),
        "sinr_scan": lambda k: k.sinr_scan(sx, sy, p, qx, qy, 2),
        "pair_direct": lambda k: k.pair_direct(ts, ps, tq, 2),
    }


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--sizes", default="256,1024,4096")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(("target", "size", "impl", "median_seconds", "speedup"))
    for n in sizes:
        fns = cases(n, rng)
        for name, fn in fns.items():
            tc = timeit(lambda: fn(_ckernels), args.reps)
            tp = timeit(lambda: fn(_pykernels), args.reps)
            w.writerow((name, n, "compiled", f"{tc:.6f}", ""))
            w.writerow((name, n, "fallback", f"{tp:.6f}", f"{tp / tc:.2f}"))
        for target, engine, run in (
            ("oracle_batch", "oracle", lambda sc, q: oracle_batch(sc, q, FLOAT64)),
            ("batch_1d_uniform", "1d-uniform", lambda sc, q: batch_1d_uniform(sc, q, FLOAT64)),
        ):
            sc, q = bench_instance(engine, n, 0)
            with using(_ckernels):
                tc = timeit(lambda: run(sc, q), args.reps)
            with using(_pykernels):
                tp = timeit(lambda: run(sc, q), args.reps)
            w.writerow((target, n, "compiled", f"{tc:.6f}", ""))
            w.writerow((target, n, "fallback", f"{tp:.6f}", f"{tp / tc:.2f}"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
