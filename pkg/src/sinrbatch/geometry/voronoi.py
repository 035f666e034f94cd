"""Weighted nearest-site structures: 1-D diagrams, line slices, NN queries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .. import kernels
from .envelope import Envelope1D, envelope_quadratics

# relative width of the float window inside which near-ties are re-decided exactly
TIE_WINDOW = 1e-9


@dataclass(frozen=True)
class WeightedSite:
    """Site with multiplicative weight; its distance to x is |x - position| / weight."""

    position: object
    weight: object
    id: int

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError("weights must be positive")


def weighted_voronoi_1d(sites, key=None) -> Envelope1D:
    """Weighted Voronoi diagram on the line as an envelope of (x - s)^2 / w^2.

    The default exact key evaluates that same quantity in the sites' own
    number type, so Fraction inputs get exact tie handling.
    """
    sites = list(sites)
    quads = []
    for s in sites:
        p, w = float(s.position), float(s.weight)
        iw2 = 1.0 / (w * w)
        quads.append((iw2, -2.0 * p * iw2, p * p * iw2))
    if key is None:
        lookup = {s.id: s for s in sites}

        def key(i, x):
            s = lookup[i]
            d = x - s.position
            return d * d / (s.weight * s.weight)

    return envelope_quadratics(quads, [s.id for s in sites], key)


def voronoi_slice_2d(sites, origin, direction, key=None) -> Envelope1D:
    """Weighted Voronoi diagram restricted to the line origin + t * direction.

    Site s contributes |origin + t d - s|^2 / w^2, a quadratic in t:
    (|d|^2 t^2 - 2 <s - origin, d> t + |s - origin|^2) / w^2.  With a unit
    direction, t is arc length along the line.
    """
    sites = list(sites)
    ox, oy = float(origin[0]), float(origin[1])
    dx, dy = float(direction[0]), float(direction[1])
    dd = dx * dx + dy * dy
    if not dd > 0:
        raise ValueError("direction must be non-zero")
    quads = []
    for s in sites:
        rx, ry = float(s.position[0]) - ox, float(s.position[1]) - oy
        a = rx * dx + ry * dy
        iw2 = 1.0 / (float(s.weight) ** 2)
        quads.append((dd * iw2, -2.0 * a * iw2, (rx * rx + ry * ry) * iw2))
    if key is None:
        lookup = {s.id: s for s in sites}

        def key(i, t):
            s = lookup[i]
            px = origin[0] + t * direction[0] - s.position[0]
            py = origin[1] + t * direction[1] - s.position[1]
            return (px * px + py * py) / (s.weight * s.weight)

    return envelope_quadratics(quads, [s.id for s in sites], key)


def _as_float2(pts):
    a = np.array([[float(p[0]), float(p[1])] for p in pts], dtype=np.float64)
    return a.reshape(-1, 2)


def nn_batch_2d(points, queries, exact=True):
    """Index of the Euclidean nearest point for each query (lowest index on ties).

    Uses a k-d tree; queries whose two best float distances are within a
    relative 1e-9 are settled by exact squared distances when ``exact``.
    """
    P = _as_float2(points)
    Q = _as_float2(queries)
    n = len(P)
    if n == 0:
        raise ValueError("no sites")
    tree = cKDTree(P)
    k = min(n, 4)
    dist, idx = tree.query(Q, k=k)
    dist = dist.reshape(len(Q), k)
    idx = idx.reshape(len(Q), k)
    out = idx[:, 0].astype(np.int64)
    if k == 1:
        return out
    tied = np.flatnonzero(dist[:, 1] <= dist[:, 0] * (1 + TIE_WINDOW))
    for r in tied:
        kk = k
        while True:
            d, ii = tree.query(Q[r], k=kk)
            cut = d[0] * (1 + TIE_WINDOW)
            if d[-1] > cut or kk == n:
                break
            kk = min(n, 2 * kk)
        cands = [int(i) for i, di in zip(ii, d) if di <= cut]
        if exact:
            q = queries[r]
            qx, qy = Fraction(q[0]), Fraction(q[1])

            def d2(i):
                p = points[i]
                ex, ey = qx - Fraction(p[0]), qy - Fraction(p[1])
                return ex * ex + ey * ey

            out[r] = min(cands, key=lambda i: (d2(i), i))
        else:
            out[r] = min(cands, key=lambda i: (float(np.sum((P[i] - Q[r]) ** 2)), i))
    return out


def weighted_nn(sites, query, eps=0.0):
    """Site minimizing |query - position| / weight, by exhaustive scan.

    Returns (id, ratio).  The id is the exact minimizer (lowest id on ties),
    which satisfies any tolerance eps >= 0.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    best, best_key = None, None
    for s in sites:
        pos = s.position if isinstance(s.position, (tuple, list)) else (s.position,)
        q = query if isinstance(query, (tuple, list)) else (query,)
        d2 = sum((a - b) * (a - b) for a, b in zip(q, pos))
        k = d2 / (s.weight * s.weight)
        if best is None or k < best_key or (k == best_key and s.id < best.id):
            best, best_key = s, k
    return best.id, math.sqrt(float(best_key))


def strongest_batch(pos, powers, alpha, queries, exact_pos=None, exact_powers=None, exact_queries=None):
    """Per query, the index maximizing p / |q - s|^alpha (lowest index on ties).

    ``pos`` and ``queries`` are float arrays of shape (n, d); when the exact
    coordinates are passed too, near-ties are re-decided in rational arithmetic.
    """
    pos = np.asarray(pos, dtype=np.float64).reshape(len(pos), -1)
    qs = np.asarray(queries, dtype=np.float64).reshape(len(queries), -1)
    sx = np.ascontiguousarray(pos[:, 0])
    sy = np.ascontiguousarray(pos[:, 1]) if pos.shape[1] > 1 else np.zeros(len(pos))
    qx = np.ascontiguousarray(qs[:, 0])
    qy = np.ascontiguousarray(qs[:, 1]) if qs.shape[1] > 1 else np.zeros(len(qs))
    p = np.ascontiguousarray(np.asarray(powers, dtype=np.float64))
    best, top, second, _ = kernels.sinr_scan(sx, sy, p, qx, qy, int(alpha))
    best = best.copy()
    if exact_pos is None:
        return best
    half = int(alpha) // 2
    for r in np.flatnonzero(second >= top * (1 - TIE_WINDOW)):
        dx = qx[r] - sx
        dy = qy[r] - sy
        with np.errstate(divide="ignore"):
            sig = p / (dx * dx + dy * dy) ** half
        cands = np.flatnonzero(sig >= top[r] * (1 - 2 * TIE_WINDOW))
        q = exact_queries[r]

        def key(i):
            d2 = sum((a - b) * (a - b) for a, b in zip(q, exact_pos[i]))
            return d2**half / exact_powers[i]

        best[r] = min((int(i) for i in cands), key=lambda i: (key(i), i))
    return best
