"""Dense integer polynomials as lists of Python ints (index i = coefficient of x^i).

Multiplication goes through Kronecker substitution: both operands are packed
into one big integer each, multiplied by GMP, and the product is unpacked.
Division by monic polynomials keeps everything integral, which is what the
exact remainder tree relies on.
"""

from __future__ import annotations

import gmpy2

NAIVE_CUTOFF = 12

_mpz = gmpy2.mpz


def trim(a):
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return a[:n] if n != len(a) else a


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return trim(out)


def sub(a, b):
    n = max(len(a), len(b))
    out = list(a) + [0] * (n - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return trim(out)


def scale(a, c):
    if not c:
        return []
    return [c * x for x in a]


def _bits(a):
    m = 0
    for c in a:
        b = c.bit_length()
        if b > m:
            m = b
    return m


def _naive_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pack(a, nbytes):
    half = 1 << (8 * nbytes - 1)
    raw = b"".join((c + half).to_bytes(nbytes, "little") for c in a)
    bias = int.from_bytes((half.to_bytes(nbytes, "little")) * len(a), "little")
    return int.from_bytes(raw, "little") - bias


def _unpack(z, nbytes, length):
    half = 1 << (8 * nbytes - 1)
    bias = int.from_bytes((half.to_bytes(nbytes, "little")) * length, "little")
    raw = (z + bias).to_bytes(nbytes * length, "little")
    fb = int.from_bytes
    return [fb(raw[i : i + nbytes], "little") - half for i in range(0, nbytes * length, nbytes)]


def mul(a, b):
    """Product of two integer polynomials."""
    if not a or not b:
        return []
    if min(len(a), len(b)) < NAIVE_CUTOFF:
        return trim(_naive_mul(a, b))
    length = len(a) + len(b) - 1
    bound = _bits(a) + _bits(b) + min(len(a), len(b)).bit_length() + 2
    nbytes = (bound + 7) // 8
    za = _pack(a, nbytes)
    zb = za if a is b else _pack(b, nbytes)
    z = int(_mpz(za) * _mpz(zb))
    return trim(_unpack(z, nbytes, length))


def inverse_series(f, k):
    """Power series inverse of f modulo x^k; requires f[0] == 1."""
    if f[0] != 1:
        raise ValueError("inverse_series needs unit constant term")
    g = [1]
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        fg = mul(f[:prec], g)[:prec]
        # g <- g * (2 - f g)
        corr = [-c for c in fg]
        if corr:
            corr[0] += 2
        else:
            corr = [2]
        g = mul(g, corr)[:prec]
    return g


def _naive_divmod_monic(a, m):
    a = list(a)
    d = len(m) - 1
    q = [0] * (len(a) - d)
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            q[i - d] = c
            base = i - d
            for j in range(d):
                a[base + j] -= c * m[j]
    return trim(q), trim(a[:d])


class MonicDivisor:
    """A monic polynomial prepared for repeated fast division.

    The reversed inverse series is cached at the largest precision requested
    so far.
    """

    __slots__ = ("m", "deg", "_rev", "_inv")

    def __init__(self, m):
        if not m or m[-1] != 1:
            raise ValueError("divisor must be monic")
        self.m = m
        self.deg = len(m) - 1
        self._rev = m[::-1]
        self._inv = [1]

    def _inverse(self, k):
        if len(self._inv) < k:
            self._inv = inverse_series(self._rev, k)
        return self._inv[:k]

    def divmod(self, a):
        d = self.deg
        if len(a) <= d:
            return [], list(a)
        k = len(a) - d
        if d < NAIVE_CUTOFF or k < NAIVE_CUTOFF:
            return _naive_divmod_monic(a, self.m)
        qrev = mul(a[::-1][:k], self._inverse(k))[:k]
        q = trim((qrev + [0] * (k - len(qrev)))[::-1])
        r = sub(a[:d], mul(q, self.m)[:d])
        return q, r

    def rem(self, a):
        return self.divmod(a)[1]


def horner(a, x):
    v = 0
    for c in reversed(a):
        v = v * x + c
    return v


def derivative(a):
    return trim([i * a[i] for i in range(1, len(a))])


def deflate(m, x):
    """Quotient of m by (y - x) when x is a root of m (synthetic division)."""
    d = len(m) - 1
    q = [0] * d
    acc = 0
    for i in range(d, 0, -1):
        acc = acc * x + m[i]
        q[i - 1] = acc
    return q


def binomial_power(c, k):
    """Coefficients of (y - c)^k."""
    out = [0] * (k + 1)
    coef = 1
    for i in range(k + 1):
        # term C(k, i) y^i (-c)^(k-i)
        out[i] = coef
        coef = coef * (k - i) // (i + 1)
    p = 1
    for i in range(k, -1, -1):
        out[i] *= p
        p *= -c
    return out


def content_gcd(a):
    g = 0
    for c in a:
        g = gmpy2.gcd(g, c)
        if g == 1:
            return 1
    return int(g)
