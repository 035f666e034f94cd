"""Shared plumbing for the engines: integer scaling, verdicts, spot checks."""

from __future__ import annotations

from math import lcm

import numpy as np

from .. import kernels
from ..algebra.backend import Backend
from ..errors import EngineMismatch
from .model import EngineReport, Verdict

# float receivers re-checked against direct summation in binary64 engines
SPOT_CHECKS = 8
# a sampled gap above this means the float pipeline has broken down
SPOT_LIMIT = 1e-4
# unsampled receivers may be worse than the sample; widen the band by this
SPOT_MARGIN = 16.0


def common_denominator(values):
    return lcm(*[v.denominator for v in values]) if values else 1


def scaled(values, scale, offset=0):
    """Integers v * scale - offset (exact when scale clears every denominator)."""
    return [v.numerator * (scale // v.denominator) - offset for v in values]


def tree_sum(pairs):
    """Sum of integer fractions (num, den) by balanced merging, without gcds."""
    pairs = list(pairs)
    if not pairs:
        return 0, 1
    while len(pairs) > 1:
        nxt = []
        for i in range(0, len(pairs) - 1, 2):
            (a, b), (c, d) = pairs[i], pairs[i + 1]
            nxt.append((a * d + c * b, b * d))
        if len(pairs) % 2:
            nxt.append(pairs[-1])
        pairs = nxt
    return pairs[0]


def require(cond, msg):
    if not cond:
        raise EngineMismatch(msg)


def exact_verdict(E, beta, cand):
    return Verdict.hear(cand) if E >= beta else Verdict.silent()


def float_verdict(E, beta, cand, guard):
    """Definite only outside the relative guard band around beta."""
    if not np.isfinite(E):
        return Verdict.uncertain(cand), True
    if E >= beta * (1 + guard):
        return Verdict.hear(cand), False
    if E < beta * (1 - guard):
        return Verdict.silent(), False
    return Verdict.uncertain(cand), True


def receiver_guard(tau, est, e, f, noise):
    """Relative guard for E = e / (f - e + N) when f carries relative error est.

    The error of f is amplified by f / (f - e + N) in E, which is large next
    to a transmitter.
    """
    if est is None:
        return tau
    if not np.isfinite(est) or est >= SPOT_LIMIT:
        return float("inf")
    with np.errstate(all="ignore"):
        amp = f / (f - e + noise)
    if not np.isfinite(amp) or amp <= 0:
        return float("inf")
    return max(tau, SPOT_MARGIN * est * amp)


def finish(engine, backend: Backend, scenario, cands, signals, totals, meta, est=None,
           rejected=()):
    """Form E = e / (f - e + N) per receiver and attach verdicts.

    On the float backend ``est`` is the measured relative error of the
    totals; it widens each receiver's guard band (see receiver_guard).
    """
    beta = scenario.beta
    N = scenario.noise
    rej = set(rejected)
    qs, vs, fl = [], [], []
    if backend.exact:
        for r, (c, e, f) in enumerate(zip(cands, signals, totals)):
            if r in rej:
                qs.append(None); vs.append(None); fl.append(("rejected",))
                continue
            E = e / (f - e + N)
            qs.append(E)
            vs.append(exact_verdict(E, beta, c))
            fl.append(())
    else:
        b = float(beta)
        n = float(N)
        for r, (c, e, f) in enumerate(zip(cands, signals, totals)):
            if r in rej:
                qs.append(None); vs.append(None); fl.append(("rejected",))
                continue
            e, f = float(e), float(f)
            with np.errstate(all="ignore"):
                E = e / (f - e + n)
            v, demoted = float_verdict(E, b, c, receiver_guard(backend.tau, est, e, f, n))
            qs.append(E)
            vs.append(v)
            fl.append(("demoted",) if demoted else ())
    meta = dict(meta)
    return EngineReport(engine, backend.name, [None if r in rej else int(c) for r, c in enumerate(cands)],
                        qs, vs, fl, meta)


def spot_check(scenario, qfloat, ftotals, dim, live=None):
    """Largest relative gap between engine totals and direct sums on a few receivers."""
    m = len(ftotals)
    idx = [i for i in (live if live is not None else range(m))]
    if not idx:
        return 0.0
    step = max(1, len(idx) // SPOT_CHECKS)
    pick = idx[::step][:SPOT_CHECKS]
    pos, pw = scenario.float_arrays()
    sx = np.ascontiguousarray(pos[:, 0])
    sy = np.ascontiguousarray(pos[:, 1]) if dim > 1 else np.zeros(len(pw))
    q = qfloat[pick]
    qx = np.ascontiguousarray(q[:, 0])
    qy = np.ascontiguousarray(q[:, 1]) if dim > 1 else np.zeros(len(pick))
    _, top, _, interf = kernels.sinr_scan(sx, sy, np.ascontiguousarray(pw), qx, qy, scenario.alpha)
    direct = top + interf
    got = np.array([float(ftotals[i]) for i in pick])
    with np.errstate(all="ignore"):
        err = np.abs(got - direct) / direct
    if not np.all(np.isfinite(err)):
        return float("inf")
    return float(err.max())


def similarity_normalizer(points):
    """Center and half-span mapping every coordinate of points into [-1, 1]."""
    arr = np.asarray(points, dtype=np.float64)
    lo = arr.min(axis=0)
    hi = arr.max(axis=0)
    center = 0.5 * (lo + hi)
    h = float(0.5 * np.max(hi - lo))
    if not h > 0:
        h = 1.0
    return center, h

