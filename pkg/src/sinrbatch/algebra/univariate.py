"""Univariate polynomials and rational functions with fast batch operations.

Exact polynomials are stored as integer numerators over one positive common
denominator, so every heavy operation runs on Python ints (GMP via gmpy2).
Binary64 polynomials are numpy arrays and use FFT multiplication.

The ``z*`` and ``f*`` helpers at the bottom work directly on integer lists or
float arrays.  Engines use them to skip the wrapper objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from ..errors import DuplicatePoint, EmptyInput, PoleAtQuery
from . import fpoly, zpoly
from .backend import EXACT, Backend, as_fraction
from .tree import FRing, SubproductTree, ZRing


class Polynomial:
    """Dense polynomial ``sum c_i x^i`` over the exact rationals or binary64.

    The zero polynomial has degree -1.  Exact instances keep integer
    numerators ``_z`` with a common denominator ``_den`` in lowest terms.
    """

    __slots__ = ("backend", "_z", "_den", "_f")

    def __init__(self, coeffs: Sequence = (), backend: Backend = EXACT):
        self.backend = backend
        if backend.exact:
            fr = [as_fraction(c) for c in coeffs]
            den = lcm(*[c.denominator for c in fr]) if fr else 1
            z = [c.numerator * (den // c.denominator) for c in fr]
            self._set_int(z, den)
            self._f = None
        else:
            self._z = None
            self._den = 1
            self._f = fpoly.trim(np.array([float(c) for c in coeffs], dtype=np.float64))

    def _set_int(self, z, den):
        z = zpoly.trim(list(z))
        if not z:
            den = 1
        else:
            if den < 0:
                z = [-c for c in z]
                den = -den
            g = gcd(zpoly.content_gcd(z), den)
            if g > 1:
                z = [c // g for c in z]
                den //= g
        self._z = z
        self._den = den

    @classmethod
    def from_ints(cls, z, den=1):
        """Exact polynomial (sum z_i x^i) / den."""
        p = cls.__new__(cls)
        p.backend = EXACT
        p._f = None
        p._set_int(z, den)
        return p

    @classmethod
    def from_array(cls, a, backend: Backend):
        p = cls.__new__(cls)
        p.backend = backend
        p._z = None
        p._den = 1
        p._f = fpoly.trim(np.asarray(a, dtype=np.float64))
        return p

    @property
    def exact(self):
        return self.backend.exact

    @property
    def coeffs(self):
        if self.exact:
            return tuple(Fraction(c, self._den) for c in self._z)
        return self._f.copy()

    @property
    def int_coeffs(self):
        """(integer numerators, common denominator); exact backend only."""
        return list(self._z), self._den

    @property
    def degree(self) -> int:
        return (len(self._z) if self.exact else self._f.size) - 1

    def is_zero(self):
        return self.degree < 0

    def __call__(self, x):
        if self.exact:
            x = as_fraction(x)
            a, b = x.numerator, x.denominator
            n = len(self._z) - 1
            if n < 0:
                return Fraction(0)
            v = 0
            bp = 1
            for c in reversed(self._z):
                v = v * a + c * bp
                bp *= b
            # v = sum z_i a^i b^(n-i)
            return Fraction(v, self._den * b**n)
        return float(fpoly.horner_many(self._f, np.array([float(x)]))[0])

    def _check(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.backend.kind is not self.backend.kind:
            raise TypeError("mixing exact and binary64 polynomials")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.exact:
            d = lcm(self._den, other._den)
            a = zpoly.scale(self._z, d // self._den)
            b = zpoly.scale(other._z, d // other._den)
            return Polynomial.from_ints(zpoly.add(a, b), d)
        return Polynomial.from_array(fpoly.add(self._f, other._f), self.backend)

    def __neg__(self):
        if self.exact:
            return Polynomial.from_ints([-c for c in self._z], self._den)
        return Polynomial.from_array(-self._f, self.backend)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return poly_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, Polynomial) or other.backend.kind is not self.backend.kind:
            return NotImplemented
        if self.exact:
            return self._z == other._z and self._den == other._den
        return self._f.shape == other._f.shape and bool(np.all(self._f == other._f))

    def __hash__(self):
        if self.exact:
            return hash((tuple(self._z), self._den))
        return hash(self._f.tobytes())

    def __repr__(self):
        if self.exact:
            return f"Polynomial({[str(c) for c in self.coeffs]})"
        return f"Polynomial({self._f.tolist()}, f64)"


@dataclass(frozen=True)
class ValueTable:
    """Sample points with the values of some function at them."""

    points: tuple
    values: tuple

    def __post_init__(self):
        if len(self.points) != len(self.values):
            raise ValueError("points and values differ in length")

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class RationalFunction:
    """num / den with den not identically zero.  Never reduced by a gcd."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if self.num.backend.kind is not self.den.backend.kind:
            raise TypeError("numerator and denominator use different backends")

    @property
    def backend(self):
        return self.num.backend

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise PoleAtQuery(x)
        return self.num(x) / d

    def __add__(self, other):
        return frac_add(self, other)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """Product: Kronecker/GMP for exact input, FFT for binary64."""
    if a.backend.kind is not b.backend.kind:
        raise TypeError("mixing exact and binary64 polynomials")
    if a.exact:
        return Polynomial.from_ints(zpoly.mul(a._z, b._z), a._den * b._den)
    return Polynomial.from_array(fpoly.mul(a._f, b._f), a.backend)


def _scaled_points(xs):
    """Integers a_j and one denominator b with x_j = a_j / b."""
    fr = [as_fraction(x) for x in xs]
    b = lcm(*[x.denominator for x in fr]) if fr else 1
    return [x.numerator * (b // x.denominator) for x in fr], b


def _homogenize(z, b):
    """Integer H with H(a) = b^n * A(a / b) for A = sum z_i x^i of degree n."""
    n = len(z) - 1
    out = list(z)
    p = 1
    for i in range(n, -1, -1):
        out[i] *= p
        p *= b
    return out


def poly_eval_batch(a: Polynomial, xs):
    """Values of a at every point of xs (list of Fractions, or float64 array)."""
    if a.exact:
        pts, b = _scaled_points(xs)
        tree = SubproductTree(pts, ZRing)
        vals = tree.evaluate(_homogenize(a._z, b))
        scale = a._den * b ** max(a.degree, 0)
        return [Fraction(v, scale) for v in vals]
    pts = np.asarray(xs, dtype=np.float64)
    with np.errstate(all="ignore"):
        return np.asarray(SubproductTree(pts, FRing).evaluate(a._f))


def _check_distinct(xs):
    seen = set()
    for x in xs:
        if x in seen:
            raise DuplicatePoint(f"repeated interpolation node {x}")
        seen.add(x)


def poly_interpolate(xs, values=None, backend: Backend = EXACT) -> Polynomial:
    """Unique polynomial of degree < len(xs) through (xs[j], values[j]).

    Accepts a ValueTable in place of the two sequences.
    """
    if isinstance(xs, ValueTable):
        xs, values = xs.points, xs.values
    if len(xs) != len(values):
        raise ValueError("points and values differ in length")
    if backend.exact:
        fx = [as_fraction(x) for x in xs]
        _check_distinct(fx)
        fv = [as_fraction(v) for v in values]
        pts, b = _scaled_points(fx)
        z, den = zinterpolate(pts, fv)
        # G(y) interpolates at a_j = b x_j, so A(x) = G(b x)
        p = 1
        for i in range(len(z)):
            z[i] *= p
            p *= b
        return Polynomial.from_ints(z, den)
    fx = np.asarray(xs, dtype=np.float64)
    _check_distinct(fx.tolist())
    with np.errstate(all="ignore"):
        coeffs = finterpolate(fx, np.asarray(values, dtype=np.float64))
    return Polynomial.from_array(coeffs, backend)


def frac_add(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """(A D + B C) / (B D), left unreduced."""
    return RationalFunction(f.num * g.den + g.num * f.den, f.den * g.den)


def frac_sum(fs: Sequence[RationalFunction]) -> RationalFunction:
    """Balanced pairwise merge of a list of fractions."""
    fs = list(fs)
    if not fs:
        raise EmptyInput("frac_sum of an empty list")
    kinds = {f.backend.kind for f in fs}
    if len(kinds) > 1:
        raise TypeError("mixing exact and binary64 fractions")
    if len(fs) == 1:
        return fs[0]
    if fs[0].backend.exact:
        terms = []
        for f in fs:
            nz, nd = f.num._z, f.num._den
            dz, dd = f.den._z, f.den._den
            # num/den = (nz * dd) / (dz * nd)
            terms.append((zpoly.scale(nz, dd), zpoly.scale(dz, nd)))
        num, den = zfrac_sum(terms)
        return RationalFunction(Polynomial.from_ints(num), Polynomial.from_ints(den))
    b = fs[0].backend
    with np.errstate(all="ignore"):
        num, den = ffrac_sum([(f.num._f, f.den._f) for f in fs])
    return RationalFunction(Polynomial.from_array(num, b), Polynomial.from_array(den, b))


def frac_eval_batch(f, xs):
    """Value of a fraction (or of the sum of a list of fractions) at every point.

    Raises PoleAtQuery naming the first point where the denominator vanishes
    (binary64: its magnitude drops below the smallest normal number; a NaN
    from numerical breakdown is passed through, not reported as a pole).
    """
    if not isinstance(f, RationalFunction):
        f = frac_sum(f)
    if f.backend.exact:
        fx = [as_fraction(x) for x in xs]
        pts, b = _scaled_points(fx)
        tree = SubproductTree(pts, ZRing)
        nz, nd = f.num._z, f.num._den
        dz, dd = f.den._z, f.den._den
        nv = tree.evaluate(_homogenize(nz, b)) if nz else [0] * len(pts)
        dv = tree.evaluate(_homogenize(dz, b))
        # value = (nv / (nd b^n_num)) / (dv / (dd b^n_den))
        shift = f.den.degree - max(f.num.degree, 0)
        out = []
        for x, u, v in zip(fx, nv, dv):
            if v == 0:
                raise PoleAtQuery(x)
            if shift >= 0:
                out.append(Fraction(u * dd * b**shift, v * nd))
            else:
                out.append(Fraction(u * dd, v * nd * b ** (-shift)))
        return out
    pts = np.asarray(xs, dtype=np.float64)
    with np.errstate(all="ignore"):
        nv, dv = ffrac_eval(f.num._f, f.den._f, pts)
        bad = np.abs(dv) < np.finfo(np.float64).tiny
        if bad.any():
            raise PoleAtQuery(float(pts[np.argmax(bad)]))
        return nv / dv


# -- integer and float kernels ------------------------------------------------


def zfrac_sum(terms):
    """Merge integer fractions [(num, den), ...] into one (num, den) pair."""
    if not terms:
        raise EmptyInput("empty sum of fractions")
    terms = list(terms)
    mul, add = zpoly.mul, zpoly.add
    while len(terms) > 1:
        nxt = []
        for i in range(0, len(terms) - 1, 2):
            (a, b), (c, d) = terms[i], terms[i + 1]
            nxt.append((add(mul(a, d), mul(c, b)), mul(b, d)))
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


def zfrac_eval(num, den, points, tree=None):
    """Integer values of num and den at integer points, sharing one tree."""
    if tree is None:
        tree = SubproductTree(points, ZRing)
    return tree.evaluate(num), tree.evaluate(den)


def zinterpolate(points, values):
    """Interpolate rational values at distinct integer points.

    Returns integer coefficients and a common denominator.
    """
    tree = SubproductTree(points, ZRing)
    if not points:
        return [], 1
    dv = tree.evaluate(zpoly.derivative(tree.product))
    ws = [Fraction(v) / d for v, d in zip(values, dv)]
    den = lcm(*[w.denominator for w in ws])
    iw = [w.numerator * (den // w.denominator) for w in ws]
    return tree.combine(iw), den


def ffrac_sum(terms):
    if not terms:
        raise EmptyInput("empty sum of fractions")
    terms = list(terms)
    mul = fpoly.mul
    while len(terms) > 1:
        nxt = []
        for i in range(0, len(terms) - 1, 2):
            (a, b), (c, d) = terms[i], terms[i + 1]
            nxt.append((FRing.add(mul(a, d), mul(c, b)), mul(b, d)))
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


def ffrac_eval(num, den, points, tree=None):
    if tree is None:
        tree = SubproductTree(np.asarray(points, dtype=np.float64), FRing)
    return np.asarray(tree.evaluate(num)), np.asarray(tree.evaluate(den))


def finterpolate(points, values):
    tree = SubproductTree(points, FRing)
    if points.size == 0:
        return np.zeros(0)
    dv = np.asarray(tree.evaluate(FRing.derivative(tree.product)))
    return tree.combine(values / dv)
