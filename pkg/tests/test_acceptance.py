"""Acceptance criteria 1-8, one summary line each (see the "acceptance criteria" section)."""

import math
import random
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from scipy.optimize import brentq

from sinrbatch import cli
from sinrbatch.algebra import EXACT, FLOAT64, Polynomial, RationalFunction, frac_eval_batch
from sinrbatch.algebra import poly_eval_batch, poly_interpolate, poly_mul
from sinrbatch.engine import (
    PtasConfig,
    VerdictKind,
    approx_batch_2d,
    batch_1d_uniform,
    batch_1d_weighted,
    batch_grid_rx,
    batch_grid_tx,
    choose_k,
    oracle_batch,
    query_grid_tx,
)
from sinrbatch.errors import PoleAtQuery
from sinrbatch.geometry import dominance_pairs

from support import (
    balanced_sum,
    brute_sinr,
    brute_tilde_f,
    float_sinr,
    float_tilde,
    instance,
    rational_normals,
    schoolbook,
)

HEAR, SILENT, UNC = VerdictKind.HEAR, VerdictKind.SILENT, VerdictKind.UNCERTAIN
SEEDS = range(100)
APPROX_SEEDS = range(50)


def same_as(rep, ref):
    """Receivers where engine and reference disagree on candidate or verdict."""
    return [r for r, (a, b, u, v) in enumerate(zip(rep.candidates, ref.candidates, rep.verdicts, ref.verdicts))
            if a != b or u != v]


# -- 1 -------------------------------------------------------------------------------------------


def test_criterion_1_exact_oracle_equivalence(acceptance):
    families = {
        "1d-uniform": (batch_1d_uniform, dict(dim=1), (256, 256)),
        "1d-weighted": (batch_1d_weighted, dict(dim=1, power="random"), (256, 256)),
        "grid-rx": (batch_grid_rx, dict(layout="grid-rx", power="random"), (16, 16)),
    }
    parts, ok = [], True
    for name, (engine, kw, (n, m)) in families.items():
        bad = total = 0
        for seed in SEEDS:
            sc, qs = instance(n, m, seed, **kw)
            rep = engine(sc, qs)
            ref = oracle_batch(sc, qs)
            bad += len(same_as(rep, ref))
            total += len(qs)
            if seed == 0:
                # one instance per family against rational brute force as well
                for r, q in enumerate(qs.points):
                    c, E = brute_sinr(sc.positions, sc.powers, sc.alpha, sc.noise, q)
                    hear = E >= sc.beta
                    if rep.candidates[r] != c or (rep.verdicts[r].kind is HEAR) != hear or rep.quantities[r] != E:
                        bad += 1
        ok &= bad == 0
        parts.append(f"{name} {total - bad}/{total}")
    acceptance(1, ok, "receivers matching oracle: " + ", ".join(parts))
    assert ok


# -- 2 -------------------------------------------------------------------------------------------


def test_criterion_2_grid_tx(acceptance):
    sc, qs = instance(64 * 64, 100, 2002, layout="grid-tx")
    (xs, ys) = sorted({t.position[0] for t in sc.transmitters}), sorted({t.position[1] for t in sc.transmitters})
    assert len(xs) == len(ys) == 64
    exact_bad = 0
    worst = 0.0
    for q in qs.points:
        direct = balanced_sum([Fraction(1) / ((q[0] - x) ** 2 + (q[1] - y) ** 2) for x in xs for y in ys])
        rep = query_grid_tx(xs, ys, sc, q)
        exact_bad += rep.meta["total"] != direct
        f = query_grid_tx(xs, ys, sc, q, FLOAT64, check=False).meta["total"]
        worst = max(worst, abs(Fraction(float(f)) - direct) / direct) if np.isfinite(f) else math.inf
    ref = oracle_batch(sc, qs)
    verdict_bad = len(same_as(batch_grid_tx(sc, qs), ref))
    ok_float = worst <= 1e-6
    ok = exact_bad == 0 and verdict_bad == 0 and ok_float
    acceptance(2, ok, f"exact f mismatches {exact_bad}/100; verdict mismatches {verdict_bad}/100; "
                      f"Float64 worst rel err {float(worst):.3g} (limit 1e-6)")
    assert exact_bad == 0 and verdict_bad == 0
    assert ok_float


# -- 3 and 4 -------------------------------------------------------------------------------------


@lru_cache(maxsize=None)
def approx_run(kind, seed, k):
    if kind == "uniform":
        sc, qs = instance(512, 512, 3000 + seed)
        source = "euclidean"
    else:
        sc, qs = instance(512, 512, 4000 + seed, power="random", beta="5")
        source = "weighted"
    rep = approx_batch_2d(sc, qs, PtasConfig.for_k(k, sc.alpha), candidate_source=source)
    return sc, qs, rep


def sandwich_violations(sc, qs, rep, k):
    """Count of receivers violating E~/gamma <= E <= gamma E~, plus surrogate mismatches."""
    g = (1 / math.cos(math.pi / k)) ** sc.alpha
    _, E, _ = float_sinr(sc.positions, sc.powers, sc.alpha, sc.noise, qs.points)
    ft, lk = float_tilde(sc.positions, sc.powers, sc.alpha, qs.points, k)
    P = np.array([float(p) for p in sc.powers])
    c = np.array(rep.candidates)
    rows = np.arange(len(c))
    e = P[c] / lk[rows, c] ** sc.alpha
    Et_ref = e / (ft - e + float(sc.noise))
    Et = np.array(rep.quantities, dtype=float)
    surrogate_bad = int(np.sum(np.abs(Et - Et_ref) > 1e-9 * Et_ref))
    lo, hi = Et / g, g * Et
    bad = 0
    for r in np.flatnonzero((E < lo * (1 + 1e-9)) | (E > hi * (1 - 1e-9))):
        # borderline in binary64: settle with exact rationals
        q = qs.points[r]
        cand, Ex = brute_sinr(sc.positions, sc.powers, sc.alpha, sc.noise, q)
        normals = rational_normals(k)
        s = sc.positions[cand]
        lq = max(abs((q[0] - s[0]) * a + (q[1] - s[1]) * b) for a, b in normals)
        ex = sc.powers[cand] / lq**sc.alpha
        Etx = ex / (brute_tilde_f(sc.positions, sc.powers, sc.alpha, q, normals) - ex + sc.noise)
        gf = Fraction(g)
        if not (Etx / gf <= Ex <= gf * Etx):
            bad += 1
    return bad, surrogate_bad


def test_criterion_3_sandwich(acceptance):
    parts, ok = [], True
    for k in (4, 12):
        bad = sbad = total = 0
        for seed in APPROX_SEEDS:
            sc, qs, rep = approx_run("uniform", seed, k)
            b, s = sandwich_violations(sc, qs, rep, k)
            bad += b
            sbad += s
            total += len(qs)
        ok &= bad == 0 and sbad == 0
        parts.append(f"k={k}: {bad} violations, {sbad} surrogate mismatches over {total} queries")
    acceptance(3, ok, "; ".join(parts))
    assert ok


def test_criterion_4_soundness(acceptance):
    parts, ok = [], True
    for kind in ("uniform", "weighted"):
        for k in (4, 12):
            bad = unc = total = 0
            for seed in APPROX_SEEDS:
                sc, qs, rep = approx_run(kind, seed, k)
                ref = oracle_batch(sc, qs)
                for v, o in zip(rep.verdicts, ref.verdicts):
                    if v.kind is HEAR and not (o.kind is HEAR and o.tx == v.tx):
                        bad += 1
                    elif v.kind is SILENT and o.kind is not SILENT:
                        bad += 1
                    unc += v.kind is UNC
                    total += 1
            ok &= bad == 0
            parts.append(f"{kind} k={k}: {bad} unsound, uncertain {unc / total:.2%}")
    acceptance(4, ok, "; ".join(parts))
    assert ok


# -- 5 -------------------------------------------------------------------------------------------


def test_criterion_5_pair_decomposition(acceptance):
    rng = np.random.default_rng(5)
    parts, ok = [], True
    for n in (100, 1000, 2000):
        P = rng.uniform(0, 1, (n, 2))
        Q = rng.uniform(0, 1, (n, 2))
        dec = dominance_pairs(P.tolist(), Q.tolist())
        codes = np.concatenate(
            [(np.asarray(a, dtype=np.int64)[:, None] * n + np.asarray(b, dtype=np.int64)[None, :]).ravel()
             for a, b in dec] or [np.zeros(0, dtype=np.int64)])
        i, j = codes // n, codes % n
        sound = bool(np.all((P[i, 0] <= Q[j, 0]) & (P[i, 1] <= Q[j, 1])))
        once = np.unique(codes).size == codes.size
        dom = (P[:, None, 0] <= Q[None, :, 0]) & (P[:, None, 1] <= Q[None, :, 1])
        want = np.flatnonzero(dom.ravel())
        cover = np.array_equal(np.sort(codes), want)
        size = sum(len(a) + len(b) for a, b in dec)
        bound = 10 * n * (math.log2(n) + 1) ** 2
        good = sound and once and cover and size <= bound
        ok &= good
        parts.append(f"n={n}: {'ok' if good else 'FAIL'} size {size} <= {bound:.0f}")
    acceptance(5, ok, "; ".join(parts))
    assert ok


# -- 6 -------------------------------------------------------------------------------------------


def test_criterion_6_algebra(acceptance):
    rng = random.Random(6)
    mul_ok = True
    for da in range(65):
        db = rng.randint(0, 64)
        a = [rng.randint(-10**12, 10**12) for _ in range(da + 1)]
        b = [rng.randint(-10**12, 10**12) for _ in range(db + 1)]
        mul_ok &= list(poly_mul(Polynomial(a), Polynomial(b)).coeffs) == schoolbook(a, b)
    rt_ok = True
    for d in (0, 1, 7, 31, 64, 127):
        a = Polynomial([Fraction(rng.randint(-999, 999), rng.randint(1, 999)) for _ in range(d + 1)])
        xs = [Fraction(rng.randint(-10**6, 10**6), 10**6) for _ in range(d + 1)]
        if len(set(xs)) == len(xs):
            rt_ok &= poly_interpolate(xs, poly_eval_batch(a, xs)) == a
    sc, qs = instance(128, 128, 66, dim=1, power="random")
    sites = [t.position[0] for t in sc.transmitters]
    pw = sc.powers
    pts = [p[0] for p in qs.points]
    ref = [balanced_sum([p / (x - s) ** 2 for s, p in zip(sites, pw)]) for x in pts]
    fs = [RationalFunction(Polynomial([p]), Polynomial([s * s, -2 * s, 1])) for s, p in zip(sites, pw)]
    exact_ok = frac_eval_batch(fs, pts) == ref
    ffs = [RationalFunction(Polynomial([float(p)], FLOAT64), Polynomial([float(s * s), float(-2 * s), 1.0], FLOAT64))
           for s, p in zip(sites, pw)]
    try:
        got = frac_eval_batch(ffs, np.array([float(x) for x in pts]))
        rel = np.abs(got - np.array([float(v) for v in ref])) / np.array([float(v) for v in ref])
        worst = float(np.max(rel)) if np.all(np.isfinite(rel)) else math.inf
        fdesc = f"Float64 worst rel err {worst:.3g}"
    except PoleAtQuery as exc:
        worst = math.inf
        fdesc = f"Float64 merged denominator underflowed at x={exc.where:.6g}"
    float_ok = worst <= 1e-6
    ok = mul_ok and rt_ok and exact_ok and float_ok
    acceptance(6, ok, f"poly_mul {'ok' if mul_ok else 'FAIL'}; round-trip {'ok' if rt_ok else 'FAIL'}; "
                      f"frac_eval exact {'ok' if exact_ok else 'FAIL'}; {fdesc} (limit 1e-6)")
    assert mul_ok and rt_ok and exact_ok
    assert float_ok


# -- 7 -------------------------------------------------------------------------------------------


def test_criterion_7_scaling(acceptance):
    sizes = cli.parse_sizes("1024..32768")
    rows, slope = cli.bench("1d-uniform", sizes, reps=3, backend="f64")
    orows, oslope = cli.bench("oracle", sizes, reps=3, backend="f64")
    times = ", ".join(f"{r[1]}:{r[4]:.3f}s" for r in rows)
    otimes = ", ".join(f"{r[1]}:{r[4]:.3f}s" for r in orows)
    ok = slope < oslope
    acceptance(7, ok, f"1d-uniform Float64 slope {slope:.3f} ({'<=' if slope <= 1.35 else '>'} 1.35), "
                      f"oracle slope {oslope:.3f}; engine [{times}]; oracle [{otimes}]")
    assert ok


# -- 8 -------------------------------------------------------------------------------------------


def test_criterion_8_choose_k(acceptance):
    parts, ok = [], True
    for alpha in (2, 4):
        for eps in (0.5, 0.1, 0.02):
            kstar = brentq(lambda k: (1 / math.cos(math.pi / k)) ** alpha - (1 + eps), 2.0001, 1e4)
            want = max(4, 2 * math.ceil(kstar / 2 - 1e-12))
            cfg = choose_k(eps, alpha)
            good = cfg.k == want and cfg.gamma <= 1 + eps
            ok &= good
            parts.append(f"a={alpha} e={eps}: k={cfg.k}{'' if good else f' (want {want})'}")
    ok &= choose_k(0.1, 2).k == 12
    acceptance(8, ok, "; ".join(parts))
    assert ok
