"""Bivariate polynomials and fractions; products by Kronecker substitution.

Coefficient ``[i][j]`` multiplies x^i y^j.  Coefficient grids are kept
rectangular (every row has the same length) and trimmed so the last row and
the last column are not identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from ..errors import EmptyInput, PoleAtQuery
from . import fpoly, zpoly
from .backend import EXACT, Backend, as_fraction
from .tree import FRing, SubproductTree, ZRing
from .univariate import Polynomial, _check_distinct, _scaled_points, poly_interpolate


def _ztrim2(z):
    rows = list(z)
    while rows and not any(rows[-1]):
        rows.pop()
    if not rows:
        return []
    w = max(len(r) for r in rows)
    rows = [list(r) + [0] * (w - len(r)) for r in rows]
    while w and not any(r[w - 1] for r in rows):
        w -= 1
    return [r[:w] for r in rows]


def _ftrim2(a):
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    if a.size == 0:
        return np.zeros((0, 0))
    rows = np.flatnonzero(np.any(a != 0, axis=1))
    cols = np.flatnonzero(np.any(a != 0, axis=0))
    if rows.size == 0:
        return np.zeros((0, 0))
    return a[: rows[-1] + 1, : cols[-1] + 1].copy()


class BiPolynomial:
    """Dense polynomial in (x, y) over the exact rationals or binary64."""

    __slots__ = ("backend", "_z", "_den", "_f")

    def __init__(self, coeffs=(), backend: Backend = EXACT):
        self.backend = backend
        if backend.exact:
            fr = [[as_fraction(c) for c in row] for row in coeffs]
            den = lcm(*[c.denominator for row in fr for c in row]) if fr else 1
            z = [[c.numerator * (den // c.denominator) for c in row] for row in fr]
            self._set_int(z, den)
            self._f = None
        else:
            self._z = None
            self._den = 1
            rows = [list(r) for r in coeffs]
            w = max((len(r) for r in rows), default=0)
            arr = np.zeros((len(rows), w))
            for i, r in enumerate(rows):
                arr[i, : len(r)] = [float(c) for c in r]
            self._f = _ftrim2(arr)

    def _set_int(self, z, den):
        z = _ztrim2(z)
        if not z:
            den = 1
        else:
            g = den
            for row in z:
                g = gcd(g, zpoly.content_gcd(row))
                if g == 1:
                    break
            if g > 1:
                z = [[c // g for c in row] for row in z]
                den //= g
        self._z = z
        self._den = den

    @classmethod
    def from_ints(cls, z, den=1):
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
        p._f = _ftrim2(a)
        return p

    @property
    def exact(self):
        return self.backend.exact

    @property
    def coeffs(self):
        if self.exact:
            return tuple(tuple(Fraction(c, self._den) for c in row) for row in self._z)
        return self._f.copy()

    @property
    def degree_x(self):
        return (len(self._z) if self.exact else self._f.shape[0]) - 1

    @property
    def degree_y(self):
        if self.exact:
            return len(self._z[0]) - 1 if self._z else -1
        return self._f.shape[1] - 1 if self._f.shape[0] else -1

    def is_zero(self):
        return self.degree_x < 0

    def __call__(self, x, y):
        if self.exact:
            x, y = as_fraction(x), as_fraction(y)
            total = Fraction(0)
            xp = Fraction(1)
            for row in self._z:
                v = 0
                for c in reversed(row):
                    v = v * y + c
                total += xp * v
                xp *= x
            return total / self._den
        ys = np.array([float(y)])
        rows = [fpoly.horner_many(r, ys)[0] for r in self._f]
        return float(fpoly.horner_many(np.array(rows), np.array([float(x)]))[0]) if rows else 0.0

    def _same(self, other):
        if not isinstance(other, BiPolynomial):
            return False
        if other.backend.kind is not self.backend.kind:
            raise TypeError("mixing exact and binary64 polynomials")
        return True

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        if self.exact:
            d = lcm(self._den, other._den)
            return BiPolynomial.from_ints(
                _zadd2(_zscale2(self._z, d // self._den), _zscale2(other._z, d // other._den)), d
            )
        return BiPolynomial.from_array(_fadd2(self._f, other._f), self.backend)

    def __neg__(self):
        if self.exact:
            return BiPolynomial.from_ints(_zscale2(self._z, -1), self._den)
        return BiPolynomial.from_array(-self._f, self.backend)

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not self._same(other):
            return NotImplemented
        return bipoly_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, BiPolynomial) or other.backend.kind is not self.backend.kind:
            return NotImplemented
        if self.exact:
            return self._z == other._z and self._den == other._den
        return self._f.shape == other._f.shape and bool(np.all(self._f == other._f))

    def __hash__(self):
        if self.exact:
            return hash((tuple(map(tuple, self._z)), self._den))
        return hash(self._f.tobytes())

    def __repr__(self):
        if self.exact:
            return f"BiPolynomial({[[str(c) for c in r] for r in self.coeffs]})"
        return f"BiPolynomial({self._f.tolist()}, f64)"


@dataclass(frozen=True)
class BiRationalFunction:
    num: BiPolynomial
    den: BiPolynomial

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    @property
    def backend(self):
        return self.num.backend

    def __call__(self, x, y):
        d = self.den(x, y)
        if d == 0:
            raise PoleAtQuery((x, y))
        return self.num(x, y) / d


# -- integer grid helpers ---------------------------------------------------------


def _zscale2(z, c):
    return [[c * v for v in row] for row in z]


def _zadd2(a, b):
    rows = max(len(a), len(b))
    w = max(len(a[0]) if a else 0, len(b[0]) if b else 0)
    out = [[0] * w for _ in range(rows)]
    for src in (a, b):
        for i, row in enumerate(src):
            o = out[i]
            for j, v in enumerate(row):
                o[j] += v
    return _ztrim2(out)


def _fadd2(a, b):
    shape = (max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1]))
    out = np.zeros(shape)
    out[: a.shape[0], : a.shape[1]] += a
    out[: b.shape[0], : b.shape[1]] += b
    return out


def kron_pack(z, stride):
    """Integer grid -> univariate coefficients under y -> x^stride (stride > degy)."""
    u = [0] * (len(z) * stride)
    for i, row in enumerate(z):
        u[i * stride : i * stride + len(row)] = row
    return zpoly.trim(u)


def kron_unpack(u, rows, stride):
    u = list(u) + [0] * (rows * stride - len(u))
    return _ztrim2([u[i * stride : (i + 1) * stride] for i in range(rows)])


def zbi_mul(a, b):
    """Product of integer coefficient grids via one univariate product."""
    if not a or not b:
        return []
    stride = len(a[0]) + len(b[0]) - 1
    prod = zpoly.mul(kron_pack(a, stride), kron_pack(b, stride))
    return kron_unpack(prod, len(a) + len(b) - 1, stride)


def fbi_mul(a, b):
    if a.size == 0 or b.size == 0:
        return np.zeros((0, 0))
    stride = a.shape[1] + b.shape[1] - 1
    ua = np.zeros(a.shape[0] * stride)
    ua.reshape(a.shape[0], stride)[:, : a.shape[1]] = a
    ub = np.zeros(b.shape[0] * stride)
    ub.reshape(b.shape[0], stride)[:, : b.shape[1]] = b
    prod = fpoly.mul(ua, ub)
    rows = a.shape[0] + b.shape[0] - 1
    out = np.zeros(rows * stride)
    out[: prod.size] = prod[: rows * stride]
    return out.reshape(rows, stride)


def bipoly_mul(a: BiPolynomial, b: BiPolynomial) -> BiPolynomial:
    if a.backend.kind is not b.backend.kind:
        raise TypeError("mixing exact and binary64 polynomials")
    if a.exact:
        return BiPolynomial.from_ints(zbi_mul(a._z, b._z), a._den * b._den)
    return BiPolynomial.from_array(fbi_mul(a._f, b._f), a.backend)


def zbifrac_sum(terms):
    """Balanced merge of integer bivariate fractions [(num, den), ...]."""
    if not terms:
        raise EmptyInput("empty sum of fractions")
    terms = list(terms)
    while len(terms) > 1:
        nxt = []
        for i in range(0, len(terms) - 1, 2):
            (a, b), (c, d) = terms[i], terms[i + 1]
            nxt.append((_zadd2(zbi_mul(a, d), zbi_mul(c, b)), zbi_mul(b, d)))
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


def fbifrac_sum(terms):
    if not terms:
        raise EmptyInput("empty sum of fractions")
    terms = list(terms)
    while len(terms) > 1:
        nxt = []
        for i in range(0, len(terms) - 1, 2):
            (a, b), (c, d) = terms[i], terms[i + 1]
            nxt.append((_fadd2(fbi_mul(a, d), fbi_mul(c, b)), fbi_mul(b, d)))
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


def bifrac_sum(fs) -> BiRationalFunction:
    fs = list(fs)
    if not fs:
        raise EmptyInput("bifrac_sum of an empty list")
    if len(fs) == 1:
        return fs[0]
    if fs[0].backend.exact:
        terms = [
            (_zscale2(f.num._z, f.den._den), _zscale2(f.den._z, f.num._den)) for f in fs
        ]
        num, den = zbifrac_sum(terms)
        return BiRationalFunction(BiPolynomial.from_ints(num), BiPolynomial.from_ints(den))
    b = fs[0].backend
    with np.errstate(all="ignore"):
        num, den = fbifrac_sum([(f.num._f, f.den._f) for f in fs])
    return BiRationalFunction(BiPolynomial.from_array(num, b), BiPolynomial.from_array(den, b))


def zbi_grid_eval(z, tx, ty):
    """Integer values on a grid; tx, ty are subproduct trees over integer points.

    Uses A = sum_j B_j(x) y^j: each column B_j is evaluated over the x points,
    then each resulting polynomial in y over the y points.
    """
    nx, ny = tx.n, ty.n
    if not z:
        return [[0] * ny for _ in range(nx)]
    w = len(z[0])
    cols = [tx.evaluate(zpoly.trim([row[j] for row in z])) for j in range(w)]
    return [ty.evaluate(zpoly.trim([cols[j][i] for j in range(w)])) for i in range(nx)]


def fbi_grid_eval(a, tx, ty):
    nx, ny = tx.n, ty.n
    if a.size == 0:
        return np.zeros((nx, ny))
    cols = np.array([tx.evaluate(a[:, j]) for j in range(a.shape[1])])  # (w, nx)
    return np.array([ty.evaluate(cols[:, i]) for i in range(nx)]).reshape(nx, ny)


def _homogenize2(z, bx, by):
    dx = len(z) - 1
    dy = len(z[0]) - 1 if z else -1
    out = []
    for i, row in enumerate(z):
        px = bx ** (dx - i)
        out.append([c * px * by ** (dy - j) for j, c in enumerate(row)])
    return out, max(dx, 0), max(dy, 0)


def bipoly_grid_eval(a: BiPolynomial, xs, ys):
    """Values a(x_i, y_k) as nested lists (exact) or a 2-D array (binary64)."""
    if a.exact:
        px, bx = _scaled_points(xs)
        py, by = _scaled_points(ys)
        h, dx, dy = _homogenize2(a._z, bx, by)
        g = zbi_grid_eval(h, SubproductTree(px, ZRing), SubproductTree(py, ZRing))
        s = a._den * bx**dx * by**dy
        return [[Fraction(v, s) for v in row] for row in g]
    fx = np.asarray(xs, dtype=np.float64)
    fy = np.asarray(ys, dtype=np.float64)
    with np.errstate(all="ignore"):
        return fbi_grid_eval(a._f, SubproductTree(fx, FRing), SubproductTree(fy, FRing))


def bipoly_grid_interpolate(xs, ys, values, backend: Backend = EXACT) -> BiPolynomial:
    """Polynomial of degree < |xs| in x and < |ys| in y matching values[i][k]."""
    nx, ny = len(xs), len(ys)
    if backend.exact:
        _check_distinct([as_fraction(x) for x in xs])
        _check_distinct([as_fraction(y) for y in ys])
        # interpolate each x-row in y, then each y-power across x
        rows = []
        for i in range(nx):
            p = poly_interpolate(ys, values[i])
            c = list(p.coeffs) + [Fraction(0)] * (ny - p.degree - 1)
            rows.append(c)
        cols = []
        for j in range(ny):
            p = poly_interpolate(xs, [rows[i][j] for i in range(nx)])
            cols.append(list(p.coeffs) + [Fraction(0)] * (nx - p.degree - 1))
        return BiPolynomial([[cols[j][i] for j in range(ny)] for i in range(nx)])
    vals = np.asarray(values, dtype=np.float64).reshape(nx, ny)
    rows = np.zeros((nx, ny))
    for i in range(nx):
        c = poly_interpolate(ys, vals[i], backend).coeffs
        rows[i, : c.size] = c
    out = np.zeros((nx, ny))
    for j in range(ny):
        c = poly_interpolate(xs, rows[:, j], backend).coeffs
        out[: c.size, j] = c
    return BiPolynomial.from_array(out, backend)


def bifrac_grid_eval(f, xs, ys):
    """Values of a fraction (or of the sum of a list of fractions) on the grid.

    PoleAtQuery carries the index pair (j, k) of the first grid entry whose
    merged denominator vanishes (binary64: drops below the smallest normal).
    """
    if not isinstance(f, BiRationalFunction):
        f = bifrac_sum(f)
    if f.backend.exact:
        fx = [as_fraction(x) for x in xs]
        fy = [as_fraction(y) for y in ys]
        px, bx = _scaled_points(fx)
        py, by = _scaled_points(fy)
        tx, ty = SubproductTree(px, ZRing), SubproductTree(py, ZRing)
        hn, nxd, nyd = _homogenize2(f.num._z, bx, by)
        hd, dxd, dyd = _homogenize2(f.den._z, bx, by)
        gn = zbi_grid_eval(hn, tx, ty)
        gd = zbi_grid_eval(hd, tx, ty)
        sn = f.num._den * bx**nxd * by**nyd
        sd = f.den._den * bx**dxd * by**dyd
        out = []
        for i, (rn, rd) in enumerate(zip(gn, gd)):
            row = []
            for k, (u, v) in enumerate(zip(rn, rd)):
                if v == 0:
                    raise PoleAtQuery((i, k))
                row.append(Fraction(u * sd, v * sn))
            out.append(row)
        return out
    fx = np.asarray(xs, dtype=np.float64)
    fy = np.asarray(ys, dtype=np.float64)
    with np.errstate(all="ignore"):
        tx, ty = SubproductTree(fx, FRing), SubproductTree(fy, FRing)
        gn = fbi_grid_eval(f.num._f, tx, ty)
        gd = fbi_grid_eval(f.den._f, tx, ty)
        bad = np.abs(gd) < np.finfo(np.float64).tiny
        if bad.any():
            i, k = np.unravel_index(np.argmax(bad), bad.shape)
            raise PoleAtQuery((int(i), int(k)))
        return gn / gd
