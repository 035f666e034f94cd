"""Dominance pair decomposition via a two-level range tree.

For point sets P and Q in the plane the decomposition lists pairs
(P_i, Q_i) so that every p in P, q in Q with p <= q coordinatewise is covered
by exactly one pair, and no other (p, q) is covered.  Canonical subsets are
dyadic blocks of the x-order, subdivided into dyadic blocks of their y-order.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PairDecomposition:
    """Pairs of index arrays (into P and into Q)."""

    pairs: tuple

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def size(self):
        return sum(len(a) + len(b) for a, b in self.pairs)


def _dyadic_prefix(r, top):
    """Aligned blocks (level, start) whose union is [0, r)."""
    out = []
    base = 0
    for k in range(top, -1, -1):
        if r >> k & 1:
            out.append((k, base))
            base += 1 << k
    return out


def dominance_pairs(P, Q, strict=(False, False)) -> PairDecomposition:
    """Decompose {(p, q) : p <= q} for p in P, q in Q.

    ``strict[c]`` makes coordinate c a strict comparison (p_c < q_c).  The
    points may hold any mutually comparable numbers, Fractions included.
    """
    n = len(P)
    if n == 0 or len(Q) == 0:
        return PairDecomposition(())
    px = [p[0] for p in P]
    py = [p[1] for p in P]
    xorder = sorted(range(n), key=lambda i: px[i])
    xs = [px[i] for i in xorder]
    top = max(n.bit_length() - 1, 0)
    # y-sorted contents of every full dyadic block of the x-order
    ysorted = {}
    for k in range(top + 1):
        size = 1 << k
        for start in range(0, n - size + 1, size):
            block = sorted(xorder[start : start + size], key=lambda i: py[i])
            ysorted[(k, start)] = (block, [py[i] for i in block])
    xcut = bisect_left if strict[0] else bisect_right
    ycut = bisect_left if strict[1] else bisect_right
    groups = {}
    for qi, q in enumerate(Q):
        r = xcut(xs, q[0])
        for k, start in _dyadic_prefix(r, top):
            block, bys = ysorted[(k, start)]
            r2 = ycut(bys, q[1])
            for k2, start2 in _dyadic_prefix(r2, k):
                groups.setdefault((k, start, k2, start2), []).append(qi)
    pairs = []
    for (k, start, k2, start2), qs in groups.items():
        block = ysorted[(k, start)][0]
        left = np.array(block[start2 : start2 + (1 << k2)], dtype=np.int64)
        pairs.append((left, np.array(qs, dtype=np.int64)))
    return PairDecomposition(tuple(pairs))
