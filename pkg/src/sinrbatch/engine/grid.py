"""Grid engines: transmitters on a grid (single query) and receivers on a grid."""

from __future__ import annotations

import math
import time
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .. import kernels
from ..algebra import fpoly, zpoly
from ..algebra.backend import EXACT, Backend, as_fraction
from ..algebra.bivariate import (
    _homogenize2,
    _scaled_points,
    fbi_grid_eval,
    fbi_mul,
    fbifrac_sum,
    zbi_grid_eval,
    zbi_mul,
    zbifrac_sum,
)
from ..algebra.tree import FRing, SubproductTree, ZRing
from ..algebra.univariate import ffrac_eval, ffrac_sum, zfrac_eval, zfrac_sum
from ..errors import QueryOnTransmitter, ScenarioError
from ..geometry.envelope import envelope_locate
from ..geometry.voronoi import WeightedSite, voronoi_slice_2d
from ._common import (
    common_denominator,
    finish,
    require,
    scaled,
    similarity_normalizer,
    spot_check,
    tree_sum,
)
from .model import ChannelParams, EngineReport, QuerySet, Scenario, Verdict


def _bracket(sorted_vals, v):
    """Indices (into sorted_vals) of the neighbours of v, at most two."""
    k = bisect_left(sorted_vals, v)
    return [j for j in (k - 1, k) if 0 <= j < len(sorted_vals)]


def _grid_candidate(xs, ys, q):
    """Nearest grid point among the corners of the cell holding q (lowest id on ties)."""
    xo = sorted(range(len(xs)), key=lambda i: xs[i])
    yo = sorted(range(len(ys)), key=lambda j: ys[j])
    xv = [xs[i] for i in xo]
    yv = [ys[j] for j in yo]
    best = None
    for a in _bracket(xv, q[0]):
        for b in _bracket(yv, q[1]):
            i, j = xo[a], yo[b]
            d = (q[0] - xs[i]) ** 2 + (q[1] - ys[j]) ** 2
            cid = i * len(ys) + j
            if best is None or d < best[0] or (d == best[0] and cid < best[1]):
                best = (d, cid)
    return best[1]


def _grid_total_exact(xs, ys, q, alpha, power):
    """f(q) summed as |Y| fractions in x evaluated at the |X| abscissas, exactly."""
    half = alpha // 2
    L = common_denominator(list(xs) + list(ys) + list(q))
    X = scaled(list(xs), L)
    Y = scaled(list(ys), L)
    qx, qy = scaled(list(q), L)
    # shift the variable to u = x - qx; term j is 1 / (u^2 + c_j^2)^half
    terms = []
    for y in Y:
        c2 = (y - qy) ** 2
        den = [0] * (alpha + 1)
        for i in range(half + 1):
            den[2 * i] = math.comb(half, i) * c2 ** (half - i)
        terms.append(([1], den))
    num, den = zfrac_sum(terms)
    pts = [x - qx for x in X]
    nv, dv = zfrac_eval(num, den, pts, SubproductTree(pts, ZRing))
    if any(v == 0 for v in dv):
        raise QueryOnTransmitter(tuple(q))
    a, b = tree_sum(list(zip(nv, dv)))
    # f = power * L^alpha * a / b
    k = power * L**alpha
    return Fraction(a * k.numerator, b * k.denominator)


def _grid_total_float(xs, ys, q, alpha, power):
    half = alpha // 2
    fx = np.array([float(x) for x in xs])
    fy = np.array([float(y) for y in ys])
    fq = np.array([float(c) for c in q])
    allc = np.concatenate([fx, fy, fq])
    h = float(np.max(allc) - np.min(allc)) or 1.0
    u = (fx - fq[0]) / h
    terms = []
    for y in fy:
        c2 = ((y - fq[1]) / h) ** 2
        den = np.zeros(alpha + 1)
        for i in range(half + 1):
            den[2 * i] = math.comb(half, i) * c2 ** (half - i)
        terms.append((np.ones(1), den))
    with np.errstate(all="ignore"):
        num, den = ffrac_sum(terms)
        nv, dv = ffrac_eval(num, den, u, SubproductTree(u, FRing))
        return float(power) * float(np.sum(nv / dv)) * h ** (-alpha)


def query_grid_tx(xs, ys, params, q, backend: Backend = EXACT, check=True) -> EngineReport:
    """One receiver against transmitters on every point of xs x ys (uniform power).

    ``params`` carries alpha, beta, noise and power (a ChannelParams or a
    Scenario).  Transmitter (xs[i], ys[j]) has id i * len(ys) + j.  On the
    float backend the total is compared with a direct sum unless ``check``
    is false, and the gap widens the guard band.
    """
    if isinstance(params, Scenario):
        params = params.channel
    xs = [as_fraction(x) for x in xs]
    ys = [as_fraction(y) for y in ys]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys) or not xs or not ys:
        raise ScenarioError("grid axes must be non-empty and distinct")
    q = tuple(as_fraction(c) for c in q)
    if q[0] in set(xs) and q[1] in set(ys):
        raise QueryOnTransmitter(q, xs.index(q[0]) * len(ys) + ys.index(q[1]))
    alpha = params.alpha
    t0 = time.perf_counter()
    cand = _grid_candidate(xs, ys, q)
    cx, cy = xs[cand // len(ys)], ys[cand % len(ys)]
    d2 = (q[0] - cx) ** 2 + (q[1] - cy) ** 2
    meta = {"engine": "grid-tx", "backend": backend.name, "grid": (len(xs), len(ys))}
    shell = _Shell(params)
    if backend.exact:
        f = _grid_total_exact(xs, ys, q, alpha, params.power)
        e = params.power / d2 ** (alpha // 2)
        rep = finish("grid-tx", backend, shell, [cand], [e], [f], meta)
    else:
        f = _grid_total_float(xs, ys, q, alpha, params.power)
        e = float(params.power) / float(d2) ** (alpha // 2)
        est = _direct_gap(xs, ys, q, alpha, params.power, f) if check else None
        meta["float_error_estimate"] = est
        rep = finish("grid-tx", backend, shell, [cand], [e], [f], meta, est=est)
    rep.meta["total"] = f
    rep.meta["timings"] = {"total": time.perf_counter() - t0}
    return rep


def _direct_gap(xs, ys, q, alpha, power, f):
    gx, gy = np.meshgrid(np.array(xs, dtype=float), np.array(ys, dtype=float), indexing="ij")
    ones = np.full(gx.size, float(power))
    _, top, _, interf = kernels.sinr_scan(gx.ravel(), gy.ravel(), ones, np.array([float(q[0])]),
                                          np.array([float(q[1])]), alpha)
    direct = float(top[0] + interf[0])
    gap = abs(f - direct) / direct
    return gap if np.isfinite(gap) else float("inf")


class _Shell:
    def __init__(self, params):
        self.beta = params.beta
        self.noise = params.noise
        self.alpha = params.alpha


def batch_grid_tx(scenario: Scenario, queries, backend: Backend = EXACT, threads=None):
    """query_grid_tx for every receiver of a scenario whose transmitters form a grid."""
    axes = scenario.grid_axes()
    require(axes is not None, "grid-tx needs transmitters forming a full grid")
    require(scenario.uniform_power, "grid-tx needs equal powers")
    if not isinstance(queries, QuerySet):
        queries = QuerySet(queries, dimension=2)
    queries.validate(scenario)
    xs, ys = axes
    params = scenario.channel

    def one(q):
        return query_grid_tx(xs, ys, params, q, backend, check=False)

    pts = list(queries.points)
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            reps = list(ex.map(one, pts))
    else:
        reps = [one(q) for q in pts]
    meta = {"engine": "grid-tx", "backend": backend.name, "grid": (len(xs), len(ys))}
    cands = [r.candidates[0] for r in reps]
    if backend.exact:
        return EngineReport("grid-tx", backend.name, cands, [r.quantities[0] for r in reps],
                            [r.verdicts[0] for r in reps], [r.flags[0] for r in reps], meta)
    totals = [r.meta["total"] for r in reps]
    pw = float(params.power)
    signals = []
    for q, c in zip(pts, cands):
        cx, cy = float(xs[c // len(ys)]), float(ys[c % len(ys)])
        signals.append(pw / ((float(q[0]) - cx) ** 2 + (float(q[1]) - cy) ** 2) ** (scenario.alpha // 2))
    est = spot_check(scenario, queries.float_array(2), totals, 2)
    meta["float_error_estimate"] = est
    return finish("grid-tx", backend, scenario, cands, signals, totals, meta, est=est)


# -- receivers on a grid ----------------------------------------------------------


def _affine(transform):
    if transform is None:
        return ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))), (Fraction(0), Fraction(0))
    M, t = transform
    M = tuple(tuple(as_fraction(c) for c in row) for row in M)
    t = tuple(as_fraction(c) for c in t)
    if M[0][0] * M[1][1] - M[0][1] * M[1][0] == 0:
        raise ScenarioError("grid transform must be invertible")
    return M, t


def _site_form_exact(M, t, s):
    """|M (x, y) + t - s|^2 as an integer bivariate polynomial times 1/D."""
    # each row gives a linear form l = m0 x + m1 y + (t - s)
    forms = []
    for r in range(2):
        forms.append((M[r][0], M[r][1], t[r] - s[r]))
    q = [[Fraction(0)] * 3 for _ in range(3)]
    for a, b, c in forms:
        q[0][0] += c * c
        q[1][0] += 2 * a * c
        q[0][1] += 2 * b * c
        q[2][0] += a * a
        q[1][1] += 2 * a * b
        q[0][2] += b * b
    D = common_denominator([v for row in q for v in row])
    return [[v.numerator * (D // v.denominator) for v in row] for row in q], D


def _grid_totals_exact(scenario, xs, ys, M, t, threads):
    alpha = scenario.alpha
    half = alpha // 2
    Lp = common_denominator(scenario.powers)
    terms = []
    for tx in scenario.transmitters:
        form, D = _site_form_exact(M, t, tx.position)
        den = [[1]]
        for _ in range(half):
            den = zbi_mul(den, form)
        P = tx.power.numerator * (Lp // tx.power.denominator)
        # p / (form / D)^half = P D^half / (Lp form^half)
        terms.append(([[P * D**half]], [[c * Lp for c in row] for row in den]))
    num, den = zbifrac_sum(terms)
    px, bx = _scaled_points(xs)
    py, by = _scaled_points(ys)
    tx_, ty_ = SubproductTree(px, ZRing), SubproductTree(py, ZRing)
    hn, nxd, nyd = _homogenize2(num, bx, by)
    hd, dxd, dyd = _homogenize2(den, bx, by)
    gn = zbi_grid_eval(hn, tx_, ty_)
    gd = zbi_grid_eval(hd, tx_, ty_)
    sn = bx**nxd * by**nyd
    sd = bx**dxd * by**dyd
    return gn, gd, sn, sd


def _grid_totals_float(scenario, xs, ys, M, t):
    alpha = scenario.alpha
    half = alpha // 2
    fx = np.array([float(x) for x in xs])
    fy = np.array([float(y) for y in ys])
    cx = 0.5 * (fx.min() + fx.max())
    cy = 0.5 * (fy.min() + fy.max())
    h = max(0.5 * (fx.max() - fx.min()), 0.5 * (fy.max() - fy.min())) or 1.0
    Mf = np.array([[float(c) for c in row] for row in M])
    tf = np.array([float(c) for c in t])
    # grid coordinate x = cx + h u, y = cy + h v
    Mh = Mf * h
    tc = Mf @ np.array([cx, cy]) + tf
    terms = []
    for tx in scenario.transmitters:
        s = np.array([float(c) for c in tx.position])
        form = np.zeros((3, 3))
        for r in range(2):
            a, b, c = Mh[r, 0], Mh[r, 1], tc[r] - s[r]
            form[0, 0] += c * c
            form[1, 0] += 2 * a * c
            form[0, 1] += 2 * b * c
            form[2, 0] += a * a
            form[1, 1] += 2 * a * b
            form[0, 2] += b * b
        den = np.ones((1, 1))
        for _ in range(half):
            den = fbi_mul(den, form)
        terms.append((np.array([[float(tx.power)]]), den))
    with np.errstate(all="ignore"):
        num, den = fbifrac_sum(terms)
        u = (fx - cx) / h
        v = (fy - cy) / h
        tu, tv = SubproductTree(u, FRing), SubproductTree(v, FRing)
        return fbi_grid_eval(num, tu, tv) / fbi_grid_eval(den, tu, tv)


def _line_candidates(scenario, xs, ys, M, t, j):
    """Candidates along grid line x = xs[j] from one slice of the weighted diagram."""
    alpha = scenario.alpha
    half = alpha // 2
    origin = (M[0][0] * xs[j] + t[0], M[1][0] * xs[j] + t[1])
    direction = (M[0][1], M[1][1])
    sites = [
        WeightedSite(tx.position, float(tx.power) ** (1.0 / alpha), i)
        for i, tx in enumerate(scenario.transmitters)
    ]
    pos = scenario.positions
    pw = scenario.powers

    def key(i, y):
        px = origin[0] + y * direction[0] - pos[i][0]
        py = origin[1] + y * direction[1] - pos[i][1]
        return (px * px + py * py) ** half / pw[i]

    env = voronoi_slice_2d(sites, origin, direction, key)
    return [envelope_locate(env, y) for y in ys]


def batch_grid_rx(scenario: Scenario, xs, ys=None, backend: Backend = EXACT, transform=None,
                  threads=None) -> EngineReport:
    """Every receiver of the grid xs x ys (optionally mapped by r -> M r + t).

    Receivers are reported row-major: (xs[j], ys[k]) has index j * len(ys) + k.
    Entries on a transmitter are flagged "rejected".
    """
    if isinstance(xs, QuerySet):
        require(xs.grid is not None, "grid-rx needs a receiver grid")
        xs, ys = xs.grid
    require(scenario.dimension == 2, "grid-rx needs a 2-D scenario")
    xs = [as_fraction(x) for x in xs]
    ys = [as_fraction(y) for y in ys]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise ScenarioError("grid coordinates must be distinct")
    M, t = _affine(transform)
    t0 = time.perf_counter()
    real = [
        (M[0][0] * x + M[0][1] * y + t[0], M[1][0] * x + M[1][1] * y + t[1]) for x in xs for y in ys
    ]
    tpos = set(scenario.positions)
    rejected = [r for r, p in enumerate(real) if p in tpos]
    meta = {"engine": "grid-rx", "backend": backend.name, "grid": (len(xs), len(ys)),
            "transform": None if transform is None else str(transform)}
    if not real:
        return EngineReport("grid-rx", backend.name, [], [], [], [], meta)

    def cands_for(j):
        return _line_candidates(scenario, xs, ys, M, t, j)

    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            lines = list(ex.map(cands_for, range(len(xs))))
    else:
        lines = [cands_for(j) for j in range(len(xs))]
    cands = [c for row in lines for c in row]
    t1 = time.perf_counter()
    alpha = scenario.alpha
    half = alpha // 2
    pos, pw = scenario.positions, scenario.powers
    rej = set(rejected)
    signals = []
    for r, (p, c) in enumerate(zip(real, cands)):
        if r in rej:
            signals.append(None)
            continue
        d2 = (p[0] - pos[c][0]) ** 2 + (p[1] - pos[c][1]) ** 2
        signals.append(pw[c] / d2**half if backend.exact else float(pw[c]) / float(d2) ** half)
    ny = len(ys)
    if backend.exact:
        gn, gd, sn, sd = _grid_totals_exact(scenario, xs, ys, M, t, threads)
        totals = []
        for r in range(len(real)):
            if r in rej:
                totals.append(None)
                continue
            u, v = gn[r // ny][r % ny], gd[r // ny][r % ny]
            totals.append(Fraction(u * sd, v * sn))
        rep = finish("grid-rx", backend, scenario, cands, signals, totals, meta, rejected=rejected)
    else:
        g = _grid_totals_float(scenario, xs, ys, M, t)
        totals = [None if r in rej else float(g[r // ny, r % ny]) for r in range(len(real))]
        live = [r for r in range(len(real)) if r not in rej]
        qf = np.array([[float(a), float(b)] for a, b in real])
        est = spot_check(scenario, qf, [0.0 if v is None else v for v in totals], 2, live)
        meta["float_error_estimate"] = est
        rep = finish("grid-rx", backend, scenario, cands, signals, totals, meta, est=est,
                     rejected=rejected)
    rep.meta["timings"] = {"candidates": t1 - t0, "algebra": time.perf_counter() - t1}
    return rep
