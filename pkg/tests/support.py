"""Independent reference computations used by the tests.

Nothing here goes through the package's algebra or geometry code: sums are
plain loops over Fractions (or integer pairs), candidates are linear scans.
"""

import math
from fractions import Fraction

import numpy as np

from sinrbatch.scenario_file import generate, parse_scenario


def dist2(a, b):
    return sum((x - y) ** 2 for x, y in zip(a, b))


def balanced_sum(fracs):
    """Sum of Fractions by pairwise rounds of integer arithmetic, reduced once."""
    pairs = [(f.numerator, f.denominator) for f in fracs]
    if not pairs:
        return Fraction(0)
    while len(pairs) > 1:
        nxt = [(a * d + c * b, b * d) for (a, b), (c, d) in zip(pairs[::2], pairs[1::2])]
        if len(pairs) % 2:
            nxt.append(pairs[-1])
        pairs = nxt
    return Fraction(*pairs[0])


def brute_sinr(positions, powers, alpha, noise, q):
    """(candidate, exact E) by direct summation; candidate = strongest signal, lowest id on ties."""
    sig = [Fraction(p) / dist2(q, s) ** (alpha // 2) for s, p in zip(positions, powers)]
    best = max(range(len(sig)), key=lambda i: (sig[i], -i))
    total = balanced_sum(sig)
    return best, sig[best] / (total - sig[best] + Fraction(noise))


def float_sinr(positions, powers, alpha, noise, queries):
    """(candidates, E, total) in binary64 with numpy broadcasting."""
    S = np.asarray([[float(c) for c in s] for s in positions])
    P = np.asarray([float(p) for p in powers])
    Q = np.asarray([[float(c) for c in q] for q in queries]).reshape(len(queries), S.shape[1])
    d2 = ((Q[:, None, :] - S[None, :, :]) ** 2).sum(axis=2)
    sig = P[None, :] / d2 ** (alpha // 2)
    best = np.argmax(sig, axis=1)
    top = sig[np.arange(len(Q)), best]
    total = sig.sum(axis=1)
    return best, top / (total - top + float(noise)), total


def rational_normals(k):
    """Rational unit normals u_j, j < k/2, from t = tan(pi j / k) (same construction as the library)."""
    out = []
    for j in range(k // 2):
        t = Fraction(math.tan(math.pi * j / k)).limit_denominator(1 << 24)
        out.append(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
    return out


def poly_norm(v, normals):
    return max(abs(v[0] * a + v[1] * b) for a, b in normals)


def brute_tilde_f(positions, powers, alpha, q, normals):
    """Direct sum of p_i / |q - s_i|_k^alpha."""
    return balanced_sum([Fraction(p) / poly_norm((q[0] - s[0], q[1] - s[1]), normals) ** alpha
                         for s, p in zip(positions, powers)])


def float_tilde(positions, powers, alpha, queries, k):
    """Direct float f~ and l_k to every site, using the regular k-gon normals."""
    S = np.asarray([[float(c) for c in s] for s in positions])
    P = np.asarray([float(p) for p in powers])
    Q = np.asarray([[float(c) for c in q] for q in queries])
    ang = 2 * np.pi * np.arange(k // 2) / k
    U = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    V = Q[:, None, :] - S[None, :, :]
    lk = np.abs(V @ U.T).max(axis=2)
    return (P[None, :] / lk**alpha).sum(axis=1), lk


def instance(n, m, seed, **kw):
    return parse_scenario(generate(n, m, seed=seed, **kw))


def schoolbook(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return out


def horner(coeffs, x):
    v = 0
    for c in reversed(coeffs):
        v = v * x + c
    return v
