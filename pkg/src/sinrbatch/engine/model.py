"""SINR model types: scenarios, query sets, verdicts and engine reports."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..algebra.backend import as_fraction
from ..errors import QueryOnTransmitter, ScenarioError


def _as_point(p, dim=None):
    if isinstance(p, (list, tuple, np.ndarray)):
        pt = tuple(as_fraction(c) for c in p)
    else:
        pt = (as_fraction(p),)
    if dim is not None and len(pt) != dim:
        raise ScenarioError(f"point {p!r} does not have dimension {dim}")
    return pt


@dataclass(frozen=True)
class Transmitter:
    position: tuple
    power: Fraction


@dataclass(frozen=True)
class ChannelParams:
    """Physical constants shared by every transmitter of a scenario."""

    alpha: int
    beta: Fraction
    noise: Fraction
    power: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "beta", as_fraction(self.beta))
        object.__setattr__(self, "noise", as_fraction(self.noise))
        object.__setattr__(self, "power", as_fraction(self.power))
        _check_channel(self.alpha, self.beta, self.noise)
        if self.power <= 0:
            raise ScenarioError("power must be positive")


def _check_channel(alpha, beta, noise):
    if not isinstance(alpha, (int, np.integer)) or isinstance(alpha, bool) or alpha < 2 or alpha % 2:
        raise ScenarioError(f"alpha must be an even integer >= 2, got {alpha!r}")
    if not beta > 1:
        raise ScenarioError("beta must exceed 1")
    if not noise > 0:
        raise ScenarioError("noise must be positive")


class Scenario:
    """Transmitters with powers, plus alpha, beta and the noise level N.

    All numbers are held as exact rationals; decimal strings are parsed
    without going through binary floats.
    """

    def __init__(self, transmitters, alpha, beta, noise, dimension=None):
        txs = []
        for t in transmitters:
            if isinstance(t, Transmitter):
                pos, pw = t.position, t.power
            elif isinstance(t, dict):
                pos, pw = t["pos"], t.get("power", 1)
            else:
                pos, pw = t
            txs.append(Transmitter(_as_point(pos), as_fraction(pw)))
        if not txs:
            raise ScenarioError("a scenario needs at least one transmitter")
        dims = {len(t.position) for t in txs}
        if dimension is None:
            dimension = dims.pop() if len(dims) == 1 else None
        if dimension not in (1, 2) or any(len(t.position) != dimension for t in txs):
            raise ScenarioError("transmitter positions must all be 1-D or all be 2-D")
        if any(t.power <= 0 for t in txs):
            raise ScenarioError("powers must be positive")
        self.alpha = int(alpha)
        if self.alpha != alpha:
            raise ScenarioError("alpha must be an integer")
        self.beta = as_fraction(beta)
        self.noise = as_fraction(noise)
        _check_channel(self.alpha, self.beta, self.noise)
        self.dimension = dimension
        self.transmitters = tuple(txs)
        self._float = None

    @classmethod
    def from_grid(cls, xs, ys, alpha, beta, noise, power=1):
        """Transmitters on every point of xs x ys; (xs[i], ys[j]) gets id i*len(ys)+j."""
        return cls([((x, y), power) for x in xs for y in ys], alpha, beta, noise, 2)

    @property
    def n(self):
        return len(self.transmitters)

    @property
    def positions(self):
        return tuple(t.position for t in self.transmitters)

    @property
    def powers(self):
        return tuple(t.power for t in self.transmitters)

    @property
    def uniform_power(self):
        p0 = self.transmitters[0].power
        return all(t.power == p0 for t in self.transmitters)

    @property
    def channel(self):
        return ChannelParams(self.alpha, self.beta, self.noise, self.transmitters[0].power)

    def float_arrays(self):
        """(positions as an (n, dim) float array, powers as a float array)."""
        if self._float is None:
            pos = np.array([[float(c) for c in t.position] for t in self.transmitters])
            pw = np.array([float(t.power) for t in self.transmitters])
            self._float = (pos, pw)
        return self._float

    def grid_axes(self):
        """(xs, ys) if the transmitters are exactly xs x ys in from_grid order, else None."""
        if self.dimension != 2:
            return None
        pos = self.positions
        xs = list(dict.fromkeys(p[0] for p in pos))
        ys = list(dict.fromkeys(p[1] for p in pos))
        if len(xs) * len(ys) != len(pos):
            return None
        if any(pos[i * len(ys) + j] != (x, y) for i, x in enumerate(xs) for j, y in enumerate(ys)):
            return None
        return xs, ys

    def __repr__(self):
        return (f"Scenario(n={self.n}, dim={self.dimension}, alpha={self.alpha}, "
                f"beta={self.beta}, noise={self.noise})")


class QuerySet:
    """Receivers, optionally arranged as the grid xs x ys (row-major in xs)."""

    def __init__(self, receivers=(), grid=None, dimension=None):
        if grid is not None:
            xs = tuple(as_fraction(x) for x in grid[0])
            ys = tuple(as_fraction(y) for y in grid[1])
            if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
                raise ScenarioError("grid coordinates must be distinct")
            self.grid = (xs, ys)
            self.points = tuple((x, y) for x in xs for y in ys)
            self.dimension = 2
        else:
            self.grid = None
            self.points = tuple(_as_point(p, dimension) for p in receivers)
            dims = {len(p) for p in self.points}
            if len(dims) > 1:
                raise ScenarioError("receivers of mixed dimension")
            self.dimension = dimension if dimension is not None else (dims.pop() if dims else None)
        self._float = None

    @classmethod
    def from_grid(cls, xs, ys):
        return cls(grid=(xs, ys))

    def __len__(self):
        return len(self.points)

    def float_array(self, dim):
        if self._float is None:
            self._float = np.array([[float(c) for c in p] for p in self.points]).reshape(len(self.points), dim)
        return self._float

    def coincidences(self, scenario):
        """Indices of receivers sitting on a transmitter, with that transmitter's id."""
        where = {}
        for i, t in enumerate(scenario.transmitters):
            where.setdefault(t.position, i)
        return [(r, where[p]) for r, p in enumerate(self.points) if p in where]

    def validate(self, scenario):
        if self.points and self.dimension != scenario.dimension:
            raise ScenarioError("receiver and transmitter dimensions differ")
        bad = self.coincidences(scenario)
        if bad:
            raise QueryOnTransmitter(*bad[0])


class VerdictKind(enum.Enum):
    HEAR = "hear"
    SILENT = "silent"
    UNCERTAIN = "uncertain"


@dataclass(frozen=True)
class Verdict:
    """Hear(id), Silent, or Uncertain(id)."""

    kind: VerdictKind
    tx: Optional[int] = None

    @classmethod
    def hear(cls, tx):
        return cls(VerdictKind.HEAR, int(tx))

    @classmethod
    def silent(cls):
        return cls(VerdictKind.SILENT)

    @classmethod
    def uncertain(cls, tx):
        return cls(VerdictKind.UNCERTAIN, int(tx))

    @property
    def definite(self):
        return self.kind is not VerdictKind.UNCERTAIN

    def __str__(self):
        return self.kind.value


@dataclass
class EngineReport:
    """Per-receiver results of one engine run, in receiver order.

    Rejected receivers (grid entries on a transmitter) carry ``None`` for
    candidate, quantity and verdict, and the flag ``"rejected"``.
    """

    engine: str
    backend: str
    candidates: list
    quantities: list
    verdicts: list
    flags: list
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.verdicts)

    def records(self):
        return list(zip(self.candidates, self.quantities, self.verdicts, self.flags))

    @property
    def uncertain_fraction(self):
        live = [v for v in self.verdicts if v is not None]
        if not live:
            return 0.0
        return sum(v.kind is VerdictKind.UNCERTAIN for v in live) / len(live)


@dataclass(frozen=True)
class PtasConfig:
    """Polygon size k and its distortion gamma = sec(pi/k)^alpha."""

    eps: float
    k: int
    gamma: float
    alpha: int = 2

    def __post_init__(self):
        if self.k < 4 or self.k % 2:
            from ..errors import InvalidK

            raise InvalidK(f"k must be even and >= 4, got {self.k}")

    @classmethod
    def for_k(cls, k, alpha):
        g = (1.0 / math.cos(math.pi / k)) ** alpha
        return cls(eps=g - 1.0, k=k, gamma=g, alpha=alpha)
