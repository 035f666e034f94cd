"""Dense binary64 polynomials as 1-D numpy arrays (index i = coefficient of x^i)."""

from __future__ import annotations

import numpy as np

from .. import kernels

# numpy's compiled convolution beats rfft below about this many terms
FFT_CUTOFF = 512


def trim(a):
    a = np.asarray(a, dtype=np.float64)
    nz = np.flatnonzero(a)
    if nz.size == 0:
        return a[:0]
    return a[: nz[-1] + 1]


def add(a, b):
    if a.size < b.size:
        a, b = b, a
    out = a.copy()
    out[: b.size] += b
    return trim(out)


def sub(a, b):
    return add(a, -b)


def mul(a, b):
    """Product via a real-input FFT over complex roots of unity."""
    if a.size == 0 or b.size == 0:
        return np.zeros(0)
    if min(a.size, b.size) < FFT_CUTOFF:
        return np.convolve(a, b)
    n = a.size + b.size - 1
    size = 1 << (n - 1).bit_length()
    return np.fft.irfft(np.fft.rfft(a, size) * np.fft.rfft(b, size), size)[:n]


def mul_monic(a, b):
    out = mul(a, b)
    out[-1] = 1.0
    return out


def inverse_series(f, k):
    """Power-series inverse of f modulo x^k by Newton iteration (f[0] == 1)."""
    g = np.ones(1)
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        fg = mul(f[:prec], g)[:prec]
        corr = -fg
        corr[0] += 2.0
        g = mul(g, corr)[:prec]
    return g


class MonicDivisor:
    __slots__ = ("m", "deg", "_rev", "_inv")

    def __init__(self, m):
        self.m = np.asarray(m, dtype=np.float64)
        self.deg = self.m.size - 1
        self._rev = self.m[::-1].copy()
        self._inv = np.ones(1)

    def _inverse(self, k):
        if self._inv.size < k:
            self._inv = inverse_series(self._rev, k)
        return self._inv[:k]

    def rem(self, a):
        d = self.deg
        if a.size <= d:
            return a
        k = a.size - d
        if d < FFT_CUTOFF or k < FFT_CUTOFF:
            return kernels.fdivmod_monic(a, self.m)[1]
        qrev = mul(a[::-1][:k], self._inverse(k))[:k]
        q = qrev[::-1]
        return a[:d] - mul(q, self.m)[:d]


def horner_many(a, xs):
    return kernels.fhorner_many(np.ascontiguousarray(a, dtype=np.float64),
                                np.ascontiguousarray(xs, dtype=np.float64))
