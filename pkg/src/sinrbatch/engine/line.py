"""Exact batch engines on the line: uniform and arbitrary powers."""

from __future__ import annotations

import math
import time
from bisect import bisect_left
from fractions import Fraction

import numpy as np

from ..algebra import zpoly
from ..algebra.backend import EXACT, Backend
from ..algebra.tree import FRing, SubproductTree, ZRing
from ..algebra.univariate import ffrac_eval, ffrac_sum, zfrac_eval, zfrac_sum
from ..geometry.envelope import envelope_locate, envelope_quadratics
from ._common import (
    common_denominator,
    finish,
    require,
    scaled,
    similarity_normalizer,
    spot_check,
)
from .model import QuerySet, Scenario


def _prepare(scenario, queries, engine):
    require(scenario.dimension == 1, f"{engine} needs a 1-D scenario")
    if not isinstance(queries, QuerySet):
        queries = QuerySet(queries, dimension=1)
    require(queries.grid is None, f"{engine} takes a list of receivers, not a grid")
    queries.validate(scenario)
    return queries


def _nearest_exact(svals, qvals):
    """Nearest transmitter per receiver by binary search, lowest id on ties."""
    order = sorted(range(len(svals)), key=lambda i: (svals[i], i))
    pos = []
    first = []
    for i in order:
        if not pos or svals[i] != pos[-1]:
            pos.append(svals[i])
            first.append(i)
    out = []
    for q in qvals:
        k = bisect_left(pos, q)
        best = None
        for j in (k - 1, k):
            if 0 <= j < len(pos):
                d = abs(q - pos[j])
                if best is None or d < best[0] or (d == best[0] and first[j] < best[1]):
                    best = (d, first[j])
        out.append(best[1])
    return out


def _nearest_float(s, q):
    order = np.lexsort((np.arange(s.size), s))
    ss = s[order]
    uniq, idx = np.unique(ss, return_index=True)
    firsts = order[idx]
    k = np.searchsorted(uniq, q)
    lo = np.clip(k - 1, 0, uniq.size - 1)
    hi = np.clip(k, 0, uniq.size - 1)
    dl = np.abs(q - uniq[lo])
    dh = np.abs(uniq[hi] - q)
    il, ih = firsts[lo], firsts[hi]
    pick_hi = (dh < dl) | ((dh == dl) & (ih < il))
    return np.where(pick_hi, ih, il)


def _totals_exact(svals, powers, qvals, alpha, uniform):
    """f(q) = sum_j p_j / (q - s_j)^alpha at every receiver, exactly.

    Coordinates are scaled to integers and centered; the fraction tree and
    the remainder tree then run on Python ints only.
    """
    L = common_denominator(list(svals) + list(qvals))
    ints = scaled(list(svals) + list(qvals), L)
    off = (min(ints) + max(ints)) // 2
    S = [v - off for v in ints[: len(svals)]]
    Q = [v - off for v in ints[len(svals) :]]
    if uniform:
        nums = [[1]] * len(S)
        Lp, pscale = 1, powers[0]
    else:
        Lp = common_denominator(powers)
        nums = [[p.numerator * (Lp // p.denominator)] for p in powers]
        pscale = Fraction(1, Lp)
    terms = [(nm, zpoly.binomial_power(s, alpha)) for nm, s in zip(nums, S)]
    num, den = zfrac_sum(terms)
    nv, dv = zfrac_eval(num, den, Q, SubproductTree(Q, ZRing))
    # f(q) = pscale * L^alpha * nv / dv
    k = pscale * L**alpha
    return [Fraction(a * k.numerator, b * k.denominator) for a, b in zip(nv, dv)]


def _totals_float(s, p, q, alpha):
    center, h = similarity_normalizer(np.concatenate([s, q]).reshape(-1, 1))
    sn = (s - center[0]) / h
    qn = (q - center[0]) / h
    binom = np.array([math.comb(alpha, i) for i in range(alpha + 1)], dtype=float)
    expo = alpha - np.arange(alpha + 1)
    terms = []
    for sj, pj in zip(sn, p):
        # (x - s)^alpha has coefficients C(alpha, i) (-s)^(alpha - i)
        den = binom * np.power(-sj, expo)
        terms.append((np.array([pj]), den))
    with np.errstate(all="ignore"):
        num, den = ffrac_sum(terms)
        nv, dv = ffrac_eval(num, den, qn, SubproductTree(qn, FRing))
        return nv / dv * h ** (-alpha)


def _run(scenario, queries, backend, engine, weighted):
    t0 = time.perf_counter()
    alpha = scenario.alpha
    svals = [t.position[0] for t in scenario.transmitters]
    qvals = [p[0] for p in queries.points]
    powers = scenario.powers
    meta = {"engine": engine, "backend": backend.name}
    if not qvals:
        return finish(engine, backend, scenario, [], [], [], meta)
    if backend.exact:
        if weighted:
            cands = _weighted_candidates(svals, powers, qvals, alpha, exact=True)
        else:
            cands = _nearest_exact(svals, qvals)
        t1 = time.perf_counter()
        totals = _totals_exact(svals, powers, qvals, alpha, uniform=not weighted)
        signals = [powers[c] / (q - svals[c]) ** alpha for c, q in zip(cands, qvals)]
        meta["normalization"] = "integer scaling"
        meta["timings"] = {"candidates": t1 - t0, "algebra": time.perf_counter() - t1}
        return finish(engine, backend, scenario, cands, signals, totals, meta)
    pos, pw = scenario.float_arrays()
    s = pos[:, 0].copy()
    q = queries.float_array(1)[:, 0].copy()
    if weighted:
        cands = _weighted_candidates(s.tolist(), pw.tolist(), q.tolist(), alpha, exact=False)
    else:
        cands = _nearest_float(s, q).tolist()
    t1 = time.perf_counter()
    totals = _totals_float(s, pw, q, alpha)
    c = np.asarray(cands)
    signals = pw[c] / (q - s[c]) ** alpha
    est = spot_check(scenario, q.reshape(-1, 1), totals, 1)
    meta["normalization"] = "affine to [-1, 1]"
    meta["float_error_estimate"] = est
    meta["timings"] = {"candidates": t1 - t0, "algebra": time.perf_counter() - t1}
    return finish(engine, backend, scenario, cands, signals, totals, meta, est=est)


def _weighted_candidates(svals, powers, qvals, alpha, exact):
    """Envelope of (x - s)^2 / w^2 with w = p^(1/alpha), located at each receiver."""
    quads = []
    for s, p in zip(svals, powers):
        fs = float(s)
        iw2 = float(p) ** (-2.0 / alpha)
        quads.append((iw2, -2.0 * fs * iw2, fs * fs * iw2))

    def key(i, x):
        # (x - s)^alpha / p orders sites exactly like the weighted distance
        return (x - svals[i]) ** alpha / powers[i]

    env = envelope_quadratics(quads, key=key)
    return [envelope_locate(env, x) for x in qvals]


def batch_1d_uniform(scenario: Scenario, queries, backend: Backend = EXACT, threads=None):
    """Nearest transmitter by binary search, f by one fraction tree and one remainder tree."""
    queries = _prepare(scenario, queries, "1d-uniform")
    require(scenario.uniform_power, "1d-uniform needs equal powers")
    return _run(scenario, queries, backend, "1d-uniform", weighted=False)


def batch_1d_weighted(scenario: Scenario, queries, backend: Backend = EXACT, threads=None):
    """Candidate from the weighted Voronoi diagram of the line, then as the uniform engine."""
    queries = _prepare(scenario, queries, "1d-weighted")
    return _run(scenario, queries, backend, "1d-weighted", weighted=True)
