"""Lower envelopes of univariate quadratics (weighted 1-D Voronoi diagrams)."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

INF = math.inf

# half-width of the window of cells re-checked by the exact key, relative to 1 + |x|
LOCATE_WINDOW = 1e-6


@dataclass(frozen=True)
class Envelope1D:
    """Piecewise owner map of a lower envelope.

    ``owners[i]`` attains the minimum between ``breakpoints[i-1]`` and
    ``breakpoints[i]``.  ``key(id, x)``, when given, evaluates function ``id``
    at ``x`` in exact arithmetic and is used to settle near-boundary queries.
    """

    breakpoints: tuple
    owners: tuple
    quads: dict = field(repr=False, default_factory=dict)
    key: Optional[Callable] = field(repr=False, default=None, compare=False)

    def __post_init__(self):
        if len(self.owners) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more owner than breakpoints")
        b = self.breakpoints
        if any(b[i] >= b[i + 1] for i in range(len(b) - 1)):
            raise ValueError("breakpoints must be strictly increasing")

    def value(self, x):
        a, b, c = self.quads[envelope_locate(self, x)]
        return (a * x + b) * x + c


def _roots(a, b, c, lo, hi):
    """Real roots of a t^2 + b t + c strictly inside (lo, hi), ascending."""
    out = []
    if a == 0.0:
        if b != 0.0:
            out = [-c / b]
    else:
        disc = b * b - 4.0 * a * c
        if disc > 0.0:
            sq = math.sqrt(disc)
            q = -0.5 * (b + math.copysign(sq, b))
            out = sorted({q / a, c / q} if q != 0.0 else {0.0})
        elif disc == 0.0:
            out = [-b / (2.0 * a)]
    return [r for r in out if lo < r < hi]


def _probe(lo, hi):
    if lo == -INF and hi == INF:
        return 0.0
    if lo == -INF:
        return hi - max(1.0, abs(hi))
    if hi == INF:
        return lo + max(1.0, abs(lo))
    return 0.5 * (lo + hi)


def _merge(e1, e2, quads):
    b1, o1 = e1
    b2, o2 = e2
    i = j = 0
    lo = -INF
    starts, owners = [], []
    while True:
        h1 = b1[i] if i < len(b1) else INF
        h2 = b2[j] if j < len(b2) else INF
        hi = min(h1, h2)
        f, g = o1[i], o2[j]
        qf, qg = quads[f], quads[g]
        da, db, dc = qf[0] - qg[0], qf[1] - qg[1], qf[2] - qg[2]
        cuts = [lo] + _roots(da, db, dc, lo, hi) + [hi]
        for l, r in zip(cuts, cuts[1:]):
            if not l < r:
                continue
            t = _probe(l, r)
            d = (da * t + db) * t + dc
            w = f if d < 0 or (d == 0 and f < g) else g
            if not owners or owners[-1] != w:
                starts.append(l)
                owners.append(w)
        if hi == INF:
            break
        if h1 == hi:
            i += 1
        if h2 == hi:
            j += 1
        lo = hi
    return starts[1:], owners


def envelope_quadratics(quads: Sequence, ids: Optional[Sequence[int]] = None, key=None) -> Envelope1D:
    """Lower envelope of quadratics ``a t^2 + b t + c`` given as (a, b, c) triples.

    Divide and conquer with linear-time merges, O(n log n) overall.  Where two
    functions agree on an interval the lower id owns it.
    """
    if not len(quads):
        raise ValueError("envelope of no functions")
    ids = list(range(len(quads))) if ids is None else list(ids)
    table = {i: tuple(float(v) for v in q) for i, q in zip(ids, quads)}

    def build(lo, hi):
        if hi - lo == 1:
            return [], [ids[lo]]
        mid = (lo + hi) // 2
        return _merge(build(lo, mid), build(mid, hi), table)

    b, o = build(0, len(ids))
    return Envelope1D(tuple(b), tuple(o), table, key)


def envelope_locate(env: Envelope1D, x):
    """Owner of the envelope at x; exact boundary ties go to the lowest id."""
    b = env.breakpoints
    xf = float(x)
    if env.key is None:
        i = bisect_left(b, xf)
        if i < len(b) and b[i] == xf:
            return min(env.owners[i], env.owners[i + 1])
        return env.owners[i]
    delta = LOCATE_WINDOW * (1.0 + abs(xf))
    lo = bisect_left(b, xf - delta)
    hi = bisect_right(b, xf + delta)
    cands = set(env.owners[lo : hi + 1])
    if len(cands) == 1:
        return env.owners[lo]
    key = env.key
    return min(cands, key=lambda i: (key(i, x), i))
