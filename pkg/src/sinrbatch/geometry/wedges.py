"""Regular-polygon norms and the double-wedge frames that realize them.

The k unit normals U_0..U_{k-1} are spaced 2*pi/k apart with U_{i+h} = -U_i
(h = k/2).  Cone i holds the directions v for which U_i maximizes <v, U_i>;
there |v|_k = <v, U_i>.  Frame j bundles cone j with its opposite cone j+h.
Cone i is cut out by <v, U_i - U_{i-1}> >= 0 and <v, U_i - U_{i+1}> >= 0;
on a shared boundary the frame with the lower index owns the direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import InvalidK

# denominator cap for the rational half-angle tangents of exact normals
EXACT_TAN_DENOM = 1 << 24


@dataclass(frozen=True)
class WedgeFrame:
    """Frame j: cone j (orientation +1) and cone j + k/2 (orientation -1).

    ``lower`` and ``upper`` are the two boundary functionals of cone j;
    ``strict`` tells whether each inequality is strict.  The opposite cone
    uses the same functionals negated, with the same strictness.
    """

    index: int
    k: int
    normal: tuple
    lower: tuple
    upper: tuple
    strict: tuple

    @property
    def to_frame(self):
        """Linear map v -> (<v, lower>, <v, upper>) as a row-major 2x2 matrix."""
        return (self.lower, self.upper)

    @property
    def axis_a(self):
        """Unit bounding direction of cone j at angle 2*pi*j/k - pi/k."""
        t = math.pi * (2 * self.index - 1) / self.k
        return (math.cos(t), math.sin(t))

    @property
    def axis_b(self):
        t = math.pi * (2 * self.index + 1) / self.k
        return (math.cos(t), math.sin(t))

    def coords(self, x):
        return (x[0] * self.lower[0] + x[1] * self.lower[1],
                x[0] * self.upper[0] + x[1] * self.upper[1])

    def height(self, x):
        return x[0] * self.normal[0] + x[1] * self.normal[1]

    def claims(self, v):
        """+1 if v lies in cone j, -1 if in cone j + k/2, else 0."""
        a, b = self.coords(v)
        sa, sb = self.strict
        if (a > 0 if sa else a >= 0) and (b > 0 if sb else b >= 0):
            return 1
        if (-a > 0 if sa else -a >= 0) and (-b > 0 if sb else -b >= 0):
            return -1
        return 0


def _check_k(k):
    if not isinstance(k, int) or isinstance(k, bool) or k < 4 or k % 2:
        raise InvalidK(f"k must be an even integer >= 4, got {k!r}")


@lru_cache(maxsize=None)
def polygon_normals(k, exact=False):
    """The k/2 normals u_0..u_{h-1} at angles 2*pi*j/k.

    Exact normals are rational points on the unit circle built from a rational
    approximation of tan(theta/2), so their norm is exactly one.
    """
    _check_k(k)
    h = k // 2
    out = []
    for j in range(h):
        theta = 2.0 * math.pi * j / k
        if exact:
            t = Fraction(math.tan(theta / 2)).limit_denominator(EXACT_TAN_DENOM)
            d = 1 + t * t
            out.append(((1 - t * t) / d, 2 * t / d))
        else:
            out.append((math.cos(theta), math.sin(theta)))
    return tuple(out)


@lru_cache(maxsize=None)
def wedge_frames(k, exact=False):
    """The k/2 frames of the regular k-gon norm (InvalidK unless k is even >= 4)."""
    _check_k(k)
    h = k // 2
    u = polygon_normals(k, exact)
    U = list(u) + [(-a, -b) for a, b in u]
    # D[i] = U_i - U_{i+1}, shared by cone i (upper) and cone i+1 (lower, negated)
    D = [(U[i][0] - U[(i + 1) % k][0], U[i][1] - U[(i + 1) % k][1]) for i in range(k)]
    frames = []
    for j in range(h):
        lo = D[(j - 1) % k]
        frames.append(
            WedgeFrame(
                index=j,
                k=k,
                normal=u[j],
                lower=(-lo[0], -lo[1]),
                upper=D[j],
                strict=(j != 0, j == h - 1),
            )
        )
    return tuple(frames)


def polygonal_norm(v, k, exact=None):
    """max_j |<v, u_j>| over the k/2 polygon normals.

    Exact normals are used when v holds Fractions or ints.
    """
    if exact is None:
        exact = all(isinstance(c, (int, Fraction)) for c in v)
    return max(abs(v[0] * a + v[1] * b) for a, b in polygon_normals(k, exact))


def polygon_gamma(k, alpha, exact=False):
    """Worst case of (|v|_2 / |v|_k)^alpha for the normals in use.

    For the float polygon this is sec(pi/k)^alpha.  For the exact polygon it
    is computed from the actual gaps: sec^2 of half a gap is 2 / (1 + cos gap),
    which is a rational number because consecutive normals are rational.
    """
    _check_k(k)
    if not exact:
        return (1.0 / math.cos(math.pi / k)) ** alpha
    u = polygon_normals(k, True)
    U = list(u) + [(-a, -b) for a, b in u]
    worst = max(2 / (1 + U[i][0] * U[(i + 1) % k][0] + U[i][1] * U[(i + 1) % k][1])
                for i in range(k))
    if alpha % 2:
        raise ValueError("exact gamma needs an even path-loss exponent")
    return worst ** (alpha // 2)
