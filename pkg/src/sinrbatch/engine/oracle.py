"""Brute-force reference: direct O(nm) evaluation of the SINR inequality."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .. import kernels
from ..algebra.backend import EXACT, Backend, as_fraction
from ..errors import QueryOnTransmitter
from ._common import common_denominator, float_verdict, scaled, tree_sum
from .model import EngineReport, QuerySet, Verdict

# relative width of the band around beta (and around signal ties) in which the
# exact oracle recomputes in rational arithmetic instead of trusting binary64
FILTER = 1e-7


def _point(q):
    return tuple(as_fraction(c) for c in q) if isinstance(q, (tuple, list)) else (as_fraction(q),)


def exact_parts(scenario, q):
    """Integer signals p_j / d_j^alpha as (num, den) pairs, for one receiver q."""
    q = _point(q)
    half = scenario.alpha // 2
    coords = [c for t in scenario.transmitters for c in t.position] + list(q)
    L = common_denominator(coords)
    Lp = common_denominator(scenario.powers)
    qi = scaled(q, L)
    out = []
    for j, t in enumerate(scenario.transmitters):
        si = scaled(t.position, L)
        d2 = sum((a - b) * (a - b) for a, b in zip(qi, si))
        if d2 == 0:
            raise QueryOnTransmitter(q, j)
        P = t.power.numerator * (Lp // t.power.denominator)
        # p / |q - s|^alpha = P L^alpha / (Lp d2^half)
        out.append((P * L ** scenario.alpha, Lp * d2**half))
    return out


def sin_ratio_direct(scenario, q, i, backend: Backend = EXACT):
    """Signal of transmitter i at q over (interference from all others + N)."""
    if backend.exact:
        parts = exact_parts(scenario, q)
        num, den = parts[i]
        inum, iden = tree_sum(parts[:i] + parts[i + 1 :])
        N = scenario.noise
        # (num/den) / (inum/iden + N)
        return Fraction(num * iden * N.denominator, den * (inum * N.denominator + N.numerator * iden))
    q = [float(c) for c in _point(q)]
    pos, pw = scenario.float_arrays()
    d2 = ((pos - np.array(q)) ** 2).sum(axis=1)
    if np.any(d2 == 0):
        raise QueryOnTransmitter(q, int(np.flatnonzero(d2 == 0)[0]))
    sig = pw / d2 ** (scenario.alpha // 2)
    return float(sig[i] / (sig.sum() - sig[i] + float(scenario.noise)))


def _exact_candidate(scenario, q):
    parts = exact_parts(scenario, q)
    # largest signal num/den, lowest id on ties
    best = 0
    for j in range(1, len(parts)):
        a, b = parts[j]
        c, d = parts[best]
        if a * d > c * b:
            best = j
    return best


def oracle_batch(scenario, queries, backend: Backend = EXACT) -> EngineReport:
    """Candidate = strongest signal (lowest id on ties); Hear iff its ratio >= beta.

    The sweep runs in binary64 through the compiled kernel.  On the exact
    backend, receivers whose float result lies within a relative band of a
    tie or of beta are recomputed with exact rationals, so the reported
    candidates and verdicts are exact.
    """
    if not isinstance(queries, QuerySet):
        queries = QuerySet(queries, dimension=scenario.dimension)
    queries.validate(scenario)
    m = len(queries)
    dim = scenario.dimension
    meta = {"engine": "oracle", "backend": backend.name}
    if m == 0:
        return EngineReport("oracle", backend.name, [], [], [], [], meta)
    pos, pw = scenario.float_arrays()
    Q = queries.float_array(dim)
    sx = np.ascontiguousarray(pos[:, 0])
    sy = np.ascontiguousarray(pos[:, 1]) if dim > 1 else np.zeros(scenario.n)
    qx = np.ascontiguousarray(Q[:, 0])
    qy = np.ascontiguousarray(Q[:, 1]) if dim > 1 else np.zeros(m)
    best, top, second, interf = kernels.sinr_scan(sx, sy, np.ascontiguousarray(pw), qx, qy, scenario.alpha)
    N = float(scenario.noise)
    beta = float(scenario.beta)
    with np.errstate(all="ignore"):
        E = top / (interf + N)
    cands, qs, vs, fl = [], [], [], []
    refined = 0
    for r in range(m):
        c = int(best[r])
        if not backend.exact:
            v, demoted = float_verdict(float(E[r]), beta, c, backend.tau)
            cands.append(c); qs.append(float(E[r])); vs.append(v)
            fl.append(("demoted",) if demoted else ())
            continue
        q = queries.points[r]
        if second[r] >= top[r] * (1 - FILTER):
            c = _exact_candidate(scenario, q)
            Er = sin_ratio_direct(scenario, q, c)
            refined += 1
        elif abs(E[r] - beta) <= FILTER * beta:
            Er = sin_ratio_direct(scenario, q, c)
            refined += 1
        else:
            Er = float(E[r])
        ok = Er >= scenario.beta if isinstance(Er, Fraction) else Er >= beta
        cands.append(c)
        qs.append(Er)
        vs.append(Verdict.hear(c) if ok else Verdict.silent())
        fl.append(())
    meta["exact_rechecks"] = refined
    return EngineReport("oracle", backend.name, cands, qs, vs, fl, meta)
