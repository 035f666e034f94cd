"""Subproduct trees over a coefficient ring, with remainder-tree evaluation.

The tree stops splitting at blocks of ``leaf`` points; inside a block the
remainders are evaluated by Horner's rule.
"""

from __future__ import annotations

import numpy as np

from . import fpoly, zpoly

LEAF_SIZE = 8


class ZRing:
    """Integer coefficients (lists of Python ints)."""

    exact = True

    @staticmethod
    def mul(a, b):
        return zpoly.mul(a, b)

    @staticmethod
    def add(a, b):
        return zpoly.add(a, b)

    @staticmethod
    def length(a):
        return len(a)

    @staticmethod
    def divisor(m):
        return zpoly.MonicDivisor(m)

    @staticmethod
    def leaf_product(pts):
        out = [1]
        for x in pts:
            nxt = [0] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i + 1] += c
                nxt[i] -= c * x
            out = nxt
        return out

    @staticmethod
    def horner_many(a, pts):
        h = zpoly.horner
        return [h(a, x) for x in pts]

    @staticmethod
    def deflate(m, x):
        return zpoly.deflate(m, x)

    @staticmethod
    def scale(a, c):
        return zpoly.scale(a, c)

    @staticmethod
    def derivative(a):
        return zpoly.derivative(a)

    @staticmethod
    def zero():
        return []


class FRing:
    """Binary64 coefficients (numpy arrays)."""

    exact = False

    @staticmethod
    def mul(a, b):
        return fpoly.mul(a, b)

    @staticmethod
    def add(a, b):
        if a.size < b.size:
            a, b = b, a
        out = a.copy()
        out[: b.size] += b
        return out

    @staticmethod
    def length(a):
        return a.size

    @staticmethod
    def divisor(m):
        return fpoly.MonicDivisor(m)

    @staticmethod
    def leaf_product(pts):
        out = np.ones(1)
        for x in pts:
            nxt = np.zeros(out.size + 1)
            nxt[1:] += out
            nxt[:-1] -= x * out
            out = nxt
        return out

    @staticmethod
    def horner_many(a, pts):
        return fpoly.horner_many(a, pts)

    @staticmethod
    def deflate(m, x):
        d = m.size - 1
        q = np.zeros(d)
        acc = 0.0
        for i in range(d, 0, -1):
            acc = acc * x + m[i]
            q[i - 1] = acc
        return q

    @staticmethod
    def scale(a, c):
        return a * c

    @staticmethod
    def derivative(a):
        return a[1:] * np.arange(1, a.size)

    @staticmethod
    def zero():
        return np.zeros(0)


class _Node:
    __slots__ = ("lo", "hi", "poly", "left", "right", "_div")

    def __init__(self, lo, hi, poly, left=None, right=None):
        self.lo = lo
        self.hi = hi
        self.poly = poly
        self.left = left
        self.right = right
        self._div = None


class SubproductTree:
    """Balanced product tree of the linear factors (x - p) over ``points``."""

    def __init__(self, points, ring, leaf=LEAF_SIZE):
        self.ring = ring
        self.points = points
        self.leaf = max(1, leaf)
        self.n = len(points)
        self.root = self._build(0, self.n) if self.n else None

    def _build(self, lo, hi):
        ring = self.ring
        if hi - lo <= self.leaf:
            return _Node(lo, hi, ring.leaf_product(self.points[lo:hi]))
        mid = (lo + hi) // 2
        left = self._build(lo, mid)
        right = self._build(mid, hi)
        poly = ring.mul(left.poly, right.poly)
        if not ring.exact:
            poly[-1] = 1.0
        return _Node(lo, hi, poly, left, right)

    @property
    def product(self):
        return self.root.poly if self.root is not None else self.ring.leaf_product([])

    def _divisor(self, node):
        if node._div is None:
            node._div = self.ring.divisor(node.poly)
        return node._div

    def evaluate(self, a):
        """Values of the polynomial a at every point, as a list (ints) or array."""
        ring = self.ring
        if self.n == 0:
            return [] if ring.exact else np.zeros(0)
        out = [0] * self.n if ring.exact else np.zeros(self.n)
        pts = self.points
        stack = [(self.root, a)]
        while stack:
            node, r = stack.pop()
            deg = ring.length(node.poly) - 1
            if ring.length(r) > deg:
                r = self._divisor(node).rem(r)
            if node.left is None or ring.length(r) <= self.leaf:
                out[node.lo : node.hi] = ring.horner_many(r, pts[node.lo : node.hi])
            else:
                stack.append((node.right, r))
                stack.append((node.left, r))
        return out

    def combine(self, weights):
        """sum_j weights[j] * prod_{i != j} (x - p_i), built bottom-up."""
        ring = self.ring
        pts = self.points

        def rec(node):
            if node.left is None:
                acc = ring.zero()
                for j in range(node.lo, node.hi):
                    w = weights[j]
                    if w:
                        acc = ring.add(acc, ring.scale(ring.deflate(node.poly, pts[j]), w))
                return acc
            a = ring.mul(rec(node.left), node.right.poly)
            b = ring.mul(rec(node.right), node.left.poly)
            return ring.add(a, b)

        if self.n == 0:
            return ring.zero()
        out = rec(self.root)
        return zpoly.trim(out) if ring.exact else out
