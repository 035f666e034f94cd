"""Pure numpy implementations of the hot loops (fallback for the compiled module)."""

import numpy as np

_CHUNK = 1 << 20


def fdivmod_monic(a, m):
    """Schoolbook division of a by the monic polynomial m (float64)."""
    a = np.array(a, dtype=np.float64)
    d = m.size - 1
    n = a.size - 1
    if n < d:
        return np.zeros(0), a
    q = np.empty(n - d + 1)
    tail = m[:d]
    for i in range(n - d, -1, -1):
        c = a[i + d]
        q[i] = c
        if c != 0.0:
            a[i : i + d] -= c * tail
    return q, a[:d]


def fhorner_many(a, xs):
    out = np.zeros(xs.shape, dtype=np.float64)
    for c in a[::-1]:
        out *= xs
        out += c
    return out


def _pow_even(d2, half):
    out = d2.copy()
    for _ in range(half - 1):
        out *= d2
    return out


def sinr_scan(sx, sy, p, qx, qy, alpha):
    """Per receiver: strongest transmitter, its signal, runner-up signal, interference.

    Signals are p / |q - s|^alpha with alpha even.  Ties in signal go to the
    lowest index.  A receiver on a transmitter gets an infinite signal.
    """
    n = sx.size
    m = qx.size
    half = alpha // 2
    best = np.zeros(m, dtype=np.int64)
    top = np.zeros(m)
    second = np.zeros(m)
    interf = np.zeros(m)
    rows = max(1, _CHUNK // max(n, 1))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for lo in range(0, m, rows):
            hi = min(m, lo + rows)
            dx = qx[lo:hi, None] - sx[None, :]
            dy = qy[lo:hi, None] - sy[None, :]
            sig = p[None, :] / _pow_even(dx * dx + dy * dy, half)
            b = np.argmax(sig, axis=1)
            r = np.arange(hi - lo)
            tb = sig[r, b]
            sig[r, b] = -1.0
            best[lo:hi] = b
            top[lo:hi] = tb
            second[lo:hi] = sig.max(axis=1) if n > 1 else 0.0
            sig[r, b] = 0.0
            interf[lo:hi] = sig.sum(axis=1)
    second[second < 0] = 0.0
    return best, top, second, interf


def pair_direct(ts, ps, tq, alpha):
    """sum_s ps[s] / (tq - ts[s])^alpha for every entry of tq."""
    half = alpha // 2
    out = np.zeros(tq.size)
    rows = max(1, _CHUNK // max(ts.size, 1))
    for lo in range(0, tq.size, rows):
        hi = min(tq.size, lo + rows)
        d = tq[lo:hi, None] - ts[None, :]
        out[lo:hi] = (ps[None, :] / _pow_even(d * d, half)).sum(axis=1)
    return out
