"""Approximate planar engines: polygonal-norm surrogate of the interference sum.

Every transmitter-receiver direction is assigned to the one wedge frame whose
normal realizes the polygonal norm.  Per frame and orientation, a dominance
pair decomposition groups the (transmitter, receiver) pairs claimed by it;
each group is one univariate sum of fractions in the frame's height
coordinate, evaluated at its receivers in a batch.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .. import kernels
from ..algebra import zpoly
from ..algebra.backend import EXACT, Backend
from ..algebra.tree import FRing, SubproductTree, ZRing
from ..algebra.univariate import ffrac_eval, ffrac_sum, zfrac_eval, zfrac_sum
from ..errors import InvalidEps, PoleAtQuery
from ..geometry.dominance import dominance_pairs
from ..geometry.voronoi import nn_batch_2d, strongest_batch
from ..geometry.wedges import polygon_gamma, polygon_normals, polygonal_norm, wedge_frames
from ._common import (
    SPOT_CHECKS,
    common_denominator,
    receiver_guard,
    require,
    scaled,
    similarity_normalizer,
    tree_sum,
)
from .model import EngineReport, PtasConfig, QuerySet, Scenario, Verdict

# groups with |S_i| * |Q_i| at most this are summed term by term
EXACT_DIRECT_WORK = 1024
FLOAT_DIRECT_WORK = 1024


class _Ratio:
    """Exact positive ratio num/den compared against Fractions without reducing it."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        if den < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    def __ge__(self, other):
        return self.num * other.denominator >= other.numerator * self.den

    def __lt__(self, other):
        return self.num * other.denominator < other.numerator * self.den

    def __float__(self):
        return self.num / self.den


def choose_k(eps, alpha) -> PtasConfig:
    """Smallest even k >= 4 whose polygon distortion sec(pi/k)^alpha is <= 1 + eps."""
    if not (isinstance(eps, (int, float, Fraction)) and 0 < eps < 1):
        raise InvalidEps(f"eps must lie in (0, 1), got {eps!r}")
    eps = float(eps)
    target = (1.0 + eps) ** (-1.0 / alpha)
    k = max(4, 2 * math.ceil(math.pi / math.acos(target) / 2))

    def gamma(k):
        return (1.0 / math.cos(math.pi / k)) ** alpha

    while gamma(k) > 1.0 + eps:
        k += 2
    while k - 2 >= 4 and gamma(k - 2) <= 1.0 + eps:
        k -= 2
    return PtasConfig(eps=eps, k=k, gamma=gamma(k), alpha=alpha)


def decide_verdict(E_tilde, beta, gamma, candidate, guard=0.0) -> Verdict:
    """Hear if E~ >= gamma beta (1 + guard), Silent if E~ < (beta / gamma)(1 - guard)."""
    if gamma < 1 or guard < 0:
        raise ValueError("need gamma >= 1 and guard >= 0")
    if guard == 0:
        if E_tilde >= gamma * beta:
            return Verdict.hear(candidate)
        if E_tilde < beta / gamma:
            return Verdict.silent()
        return Verdict.uncertain(candidate)
    if E_tilde >= gamma * beta * (1 + guard):
        return Verdict.hear(candidate)
    if E_tilde < beta / gamma * (1 - guard):
        return Verdict.silent()
    return Verdict.uncertain(candidate)


def _int_functional(v):
    """Integer multiple of a rational 2-vector, and the positive scale used."""
    v = [Fraction(c) for c in v]
    c = common_denominator(v)
    return (v[0].numerator * (c // v[0].denominator), v[1].numerator * (c // v[1].denominator)), c


def _exact_frame(frame, S, Q, P, alpha):
    """(receiver, num, den, frame denominator) contributions of one frame, both orientations."""
    # the boundary functionals are only compared, so any positive scale works;
    # the height keeps its own scale c, which enters the final values
    nrm, c = _int_functional(frame.normal)
    lo, _ = _int_functional(frame.lower)
    up, _ = _int_functional(frame.upper)

    def lin(v, x):
        return v[0] * x[0] + v[1] * x[1]

    sA = [lin(lo, s) for s in S]
    sB = [lin(up, s) for s in S]
    sT = [lin(nrm, s) for s in S]
    qA = [lin(lo, q) for q in Q]
    qB = [lin(up, q) for q in Q]
    qT = [lin(nrm, q) for q in Q]
    out = []
    for sign in (1, -1):
        dec = dominance_pairs(
            [(sign * a, sign * b) for a, b in zip(sA, sB)],
            [(sign * a, sign * b) for a, b in zip(qA, qB)],
            frame.strict,
        )
        for left, right in dec:
            ts = [sign * sT[i] for i in left]
            tq = [sign * qT[j] for j in right]
            if len(ts) * len(tq) <= EXACT_DIRECT_WORK:
                w = [P[i] for i in left]
                for j, t in zip(right, tq):
                    a, b = tree_sum([(wi, (t - u) ** alpha) for wi, u in zip(w, ts)])
                    if b == 0:
                        raise PoleAtQuery(int(j))
                    out.append((int(j), a, b))
                continue
            off = max(ts)
            terms = [([P[i]], zpoly.binomial_power(t - off, alpha)) for i, t in zip(left, ts)]
            num, den = zfrac_sum(terms)
            pts = [t - off for t in tq]
            nv, dv = zfrac_eval(num, den, pts, SubproductTree(pts, ZRing))
            for j, a, b in zip(right, nv, dv):
                if b == 0:
                    raise PoleAtQuery(int(j))
                out.append((int(j), a, b))
    return out, c


def _float_frame(frame, S, Q, P, alpha):
    nrm = np.array(frame.normal, dtype=float)
    lo = np.array(frame.lower, dtype=float)
    up = np.array(frame.upper, dtype=float)
    sA, sB, sT = S @ lo, S @ up, S @ nrm
    qA, qB, qT = Q @ lo, Q @ up, Q @ nrm
    out = np.zeros(len(Q))
    half = alpha // 2
    binom = np.array([math.comb(alpha, i) for i in range(alpha + 1)], dtype=float)
    expo = alpha - np.arange(alpha + 1)
    for sign in (1.0, -1.0):
        dec = dominance_pairs(
            list(zip((sign * sA).tolist(), (sign * sB).tolist())),
            list(zip((sign * qA).tolist(), (sign * qB).tolist())),
            frame.strict,
        )
        for left, right in dec:
            ts = sign * sT[left]
            tq = sign * qT[right]
            if left.size * right.size <= FLOAT_DIRECT_WORK:
                out[right] += kernels.pair_direct(ts, P[left], tq, alpha)
                continue
            off = ts.max()
            terms = [(np.array([P[i]]), binom * np.power(-(t - off), expo)) for i, t in zip(left, ts)]
            with np.errstate(all="ignore"):
                num, den = ffrac_sum(terms)
                pts = tq - off
                nv, dv = ffrac_eval(num, den, pts, SubproductTree(pts, FRing))
                out[right] += nv / dv
    return out


def tilde_f_batch(scenario: Scenario, queries, frames=None, k=4, backend: Backend = EXACT,
                  threads=None):
    """Surrogate sum f~(q) = sum_i p_i / <q - s_i, u_j(i,q)>^alpha for every receiver.

    ``frames`` defaults to wedge_frames(k) (rational normals on the exact
    backend).  Returns Fractions (exact) or a float array.
    """
    require(scenario.dimension == 2, "tilde_f_batch needs a 2-D scenario")
    if not isinstance(queries, QuerySet):
        queries = QuerySet(queries, dimension=2)
    if frames is None:
        frames = wedge_frames(k, backend.exact)
    alpha = scenario.alpha
    m = len(queries)
    if m == 0:
        return [] if backend.exact else np.zeros(0)
    if backend.exact:
        return [Fraction(a, b) for a, b in _tilde_parts(scenario, queries, frames, threads)]
    pos, pw = scenario.float_arrays()
    Qf = queries.float_array(2)
    center, h = similarity_normalizer(np.vstack([pos, Qf]))
    S = (pos - center) / h
    Qn = (Qf - center) / h

    def runf(fr):
        return _float_frame(fr, S, Qn, pw, alpha)

    total = np.zeros(m)
    for part in _map(runf, frames, threads):
        total += part
    return total * h ** (-alpha)


def _tilde_parts(scenario, queries, frames, threads):
    """Exact f~ per receiver as an unreduced integer pair (num, den)."""
    alpha = scenario.alpha
    m = len(queries)
    coords = [c for p in scenario.positions for c in p] + [c for p in queries.points for c in p]
    L = common_denominator(coords)
    S = [tuple(scaled(list(p), L)) for p in scenario.positions]
    Q = [tuple(scaled(list(p), L)) for p in queries.points]
    Lp = common_denominator(scenario.powers)
    P = [p.numerator * (Lp // p.denominator) for p in scenario.powers]

    def run(fr):
        return _exact_frame(fr, S, Q, P, alpha)

    per_q = [[] for _ in range(m)]
    for contrib, c in _map(run, frames, threads):
        # heights differ by (T_q - T_s) / (L c): each term carries (L c)^alpha / Lp
        kf = (L * c) ** alpha
        for j, a, b in contrib:
            per_q[j].append((a * kf, b * Lp))
    return [tree_sum(pairs) for pairs in per_q]


def _surrogate_gap(pos, pw, Qf, ft, k, alpha):
    """Largest relative gap between float f~ and its direct sum on a few receivers."""
    m = len(Qf)
    pick = list(range(0, m, max(1, m // SPOT_CHECKS)))[:SPOT_CHECKS]
    U = np.array(polygon_normals(k, exact=False), dtype=float)
    worst = 0.0
    for r in pick:
        lk = np.abs((Qf[r] - pos) @ U.T).max(axis=1)
        direct = float(np.sum(pw / lk**alpha))
        gap = abs(float(ft[r]) - direct) / direct
        if not np.isfinite(gap):
            return float("inf")
        worst = max(worst, gap)
    return worst


def _map(fn, items, threads):
    items = list(items)
    if threads and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, items))
    return [fn(it) for it in items]


def approx_batch_2d(scenario: Scenario, queries, config=None, candidate_source="euclidean",
                    backend: Backend = EXACT, threads=None) -> EngineReport:
    """Hear / Silent / Uncertain from the polygonal surrogate E~.

    ``config`` is a PtasConfig (default: k = 4).  ``candidate_source`` is
    "euclidean" (uniform powers) or "weighted" (exact weighted scan; requires
    beta > gamma^2).
    """
    t0 = time.perf_counter()
    require(scenario.dimension == 2, "approximate engines need a 2-D scenario")
    if not isinstance(queries, QuerySet):
        queries = QuerySet(queries, dimension=2)
    queries.validate(scenario)
    alpha = scenario.alpha
    if config is None:
        config = PtasConfig.for_k(4, alpha)
    k = config.k
    gamma = (1.0 / math.cos(math.pi / k)) ** alpha
    if candidate_source == "euclidean":
        require(scenario.uniform_power, "Euclidean candidates need equal powers; use the weighted source")
    elif candidate_source == "weighted":
        require(float(scenario.beta) > gamma * gamma,
                f"weighted candidates need beta > gamma^2 = {gamma * gamma:.6g}")
    else:
        raise ValueError(f"unknown candidate source {candidate_source!r}")
    frames = wedge_frames(k, backend.exact)
    m = len(queries)
    name = "approx" if k == 4 else "ptas"
    meta = {"engine": name, "backend": backend.name, "k": k, "gamma": gamma, "eps": config.eps,
            "candidate_source": candidate_source}
    if m == 0:
        return EngineReport(name, backend.name, [], [], [], [], meta)
    pos, pw = scenario.float_arrays()
    Qf = queries.float_array(2)
    if candidate_source == "euclidean":
        cands = nn_batch_2d(scenario.positions, queries.points, exact=backend.exact).tolist()
    else:
        kwargs = {}
        if backend.exact:
            kwargs = dict(exact_pos=scenario.positions, exact_powers=scenario.powers,
                          exact_queries=queries.points)
        cands = strongest_batch(pos, pw, alpha, Qf, **kwargs).tolist()
    t1 = time.perf_counter()
    if backend.exact:
        parts = _tilde_parts(scenario, queries, frames, threads)
    else:
        ft = tilde_f_batch(scenario, queries, frames, k, backend, threads)
    t2 = time.perf_counter()
    qs, vs, fl = [], [], []
    if backend.exact:
        g = polygon_gamma(k, alpha, exact=True)
        meta["gamma_exact"] = float(g)
        beta, N = scenario.beta, scenario.noise
        positions, powers = scenario.positions, scenario.powers
        for q, c, (A, B) in zip(queries.points, cands, parts):
            s = positions[c]
            lk = polygonal_norm((q[0] - s[0], q[1] - s[1]), k, exact=True)
            e = powers[c] / lk**alpha
            en, ed = e.numerator, e.denominator
            # E~ = e / (A/B - e + N) = (en * B * ed' ...) kept as one integer ratio
            X = (A * ed - en * B) * N.denominator + N.numerator * B * ed
            Y = B * ed * N.denominator
            Et = _Ratio(en * Y, ed * X)
            v = decide_verdict(Et, beta, g, c, 0)
            qs.append(float(Et))
            vs.append(v)
            fl.append(())
    else:
        beta, N = float(scenario.beta), float(scenario.noise)
        est = _surrogate_gap(pos, pw, Qf, ft, k, alpha)
        meta["float_error_estimate"] = est
        for q, c, f in zip(Qf, cands, ft):
            s = pos[c]
            lk = polygonal_norm((float(q[0] - s[0]), float(q[1] - s[1])), k, exact=False)
            e = pw[c] / lk**alpha
            with np.errstate(all="ignore"):
                Et = float(e / (f - e + N))
            guard = receiver_guard(backend.tau, est, float(e), float(f), N)
            if np.isfinite(Et):
                v = decide_verdict(Et, beta, gamma, c, guard)
                borderline = v.kind.value == "uncertain" and decide_verdict(Et, beta, gamma, c, 0).definite
            else:
                v, borderline = Verdict.uncertain(c), True
            qs.append(Et)
            vs.append(v)
            fl.append(("demoted",) if borderline else ())
    meta["timings"] = {"candidates": t1 - t0, "surrogate": t2 - t1}
    rep = EngineReport(name, backend.name, [int(c) for c in cands], qs, vs, fl, meta)
    meta["uncertain_fraction"] = rep.uncertain_fraction
    return rep
