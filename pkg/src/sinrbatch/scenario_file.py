"""Scenario files (JSON with decimal strings) and seeded scenario generation."""

from __future__ import annotations

import json
import math
from decimal import Decimal
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from .algebra.backend import as_fraction
from .engine.model import QuerySet, Scenario
from .errors import ScenarioError

# generated coordinates live on the lattice 10^-DIGITS
DIGITS = 6


def _num(v, what):
    if isinstance(v, bool) or not isinstance(v, (str, int, Decimal)):
        raise ScenarioError(f"{what}: expected a decimal string, got {v!r}")
    try:
        return as_fraction(v) if not isinstance(v, Decimal) else Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"{what}: {v!r} is not a decimal") from exc


def _coords(p, dim, what):
    if not isinstance(p, list) or len(p) != dim:
        raise ScenarioError(f"{what}: expected {dim} coordinates, got {p!r}")
    return tuple(_num(c, what) for c in p)


def parse_scenario(doc):
    """(Scenario, QuerySet) from a decoded ScenarioFile document."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario file must hold a JSON object")
    for key in ("alpha", "beta", "noise", "dimension", "transmitters", "receivers"):
        if key not in doc:
            raise ScenarioError(f"missing field {key!r}")
    dim = doc["dimension"]
    if dim not in (1, 2) or isinstance(dim, bool):
        raise ScenarioError(f"dimension must be 1 or 2, got {dim!r}")
    alpha = doc["alpha"]
    if isinstance(alpha, bool) or not isinstance(alpha, int):
        raise ScenarioError(f"alpha must be an integer, got {alpha!r}")
    txs = doc["transmitters"]
    if not isinstance(txs, list) or not txs:
        raise ScenarioError("transmitters must be a non-empty list")
    tlist = []
    for i, t in enumerate(txs):
        if not isinstance(t, dict) or "pos" not in t or "power" not in t:
            raise ScenarioError(f"transmitter {i}: needs 'pos' and 'power'")
        tlist.append((_coords(t["pos"], dim, f"transmitter {i}"), _num(t["power"], f"transmitter {i} power")))
    scenario = Scenario(tlist, alpha, _num(doc["beta"], "beta"), _num(doc["noise"], "noise"), dim)
    rx = doc["receivers"]
    if isinstance(rx, dict):
        grid = rx.get("grid")
        if dim != 2 or not isinstance(grid, dict) or not isinstance(grid.get("xs"), list) \
                or not isinstance(grid.get("ys"), list):
            raise ScenarioError("grid receivers need dimension 2 and {'grid': {'xs': [...], 'ys': [...]}}")
        xs = [_num(x, "receiver grid") for x in grid["xs"]]
        ys = [_num(y, "receiver grid") for y in grid["ys"]]
        queries = QuerySet(grid=(xs, ys))
    elif isinstance(rx, list):
        queries = QuerySet([_coords(p, dim, f"receiver {r}") for r, p in enumerate(rx)], dimension=dim)
    else:
        raise ScenarioError("receivers must be a list of points or a grid")
    return scenario, queries


def load_scenario(path):
    """Read a ScenarioFile; JSON numbers are kept as exact decimals."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh, parse_float=Decimal)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from exc
    return parse_scenario(doc)


def decimal_str(v):
    """Exact decimal text for a rational with terminating expansion, else 'p/q'."""
    v = as_fraction(v)
    d = v.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{v.numerator}/{v.denominator}"
    e = max(twos, fives)
    digits = v.numerator * 10**e // v.denominator
    if e == 0:
        return str(digits)
    sign = "-" if digits < 0 else ""
    s = str(abs(digits)).rjust(e + 1, "0")
    return f"{sign}{s[:-e]}.{s[-e:]}"


def dump_scenario(scenario, queries):
    """ScenarioFile document (a dict) for a scenario and its receivers."""
    doc = {
        "alpha": scenario.alpha,
        "beta": decimal_str(scenario.beta),
        "noise": decimal_str(scenario.noise),
        "dimension": scenario.dimension,
        "transmitters": [
            {"pos": [decimal_str(c) for c in t.position], "power": decimal_str(t.power)}
            for t in scenario.transmitters
        ],
    }
    if queries.grid is not None:
        doc["receivers"] = {"grid": {"xs": [decimal_str(x) for x in queries.grid[0]],
                                     "ys": [decimal_str(y) for y in queries.grid[1]]}}
    else:
        doc["receivers"] = [[decimal_str(c) for c in p] for p in queries.points]
    return doc


def _lattice(k, digits):
    return format(Decimal(int(k)).scaleb(-digits).normalize(), "f") if k else "0"


def _distinct_ints(rng, count, top):
    if count > top + 1:
        raise ScenarioError(f"cannot draw {count} distinct lattice values")
    return np.sort(rng.choice(top + 1, size=count, replace=False))


def _far_points(rng, count, dim, top, avoid, sep, rounds=200, taken=None):
    """Lattice points at distance >= sep from every row of ``avoid``, distinct from ``taken``."""
    tree = cKDTree(avoid / top) if len(avoid) else None
    pts = rng.integers(0, top + 1, size=(count, dim))
    seen = set(map(tuple, taken.tolist())) if taken is not None else set()
    for _ in range(rounds):
        bad = np.zeros(count, dtype=bool)
        if tree is not None and sep > 0:
            d, _ = tree.query(pts / top, k=1)
            # small slack keeps float rounding on the safe side
            bad |= d < sep * (1 + 1e-9)
        keys = [tuple(p) for p in pts.tolist()]
        dup = set()
        for i, key in enumerate(keys):
            if key in seen or key in dup:
                bad[i] = True
            else:
                dup.add(key)
        if not bad.any():
            return pts
        pts[bad] = rng.integers(0, top + 1, size=(int(bad.sum()), dim))
    raise ScenarioError(f"could not place {count} points with separation {sep}; the request is infeasible")


def generate(n, m, dim=2, power="uniform", layout="random", seed=0, min_sep="0.001", alpha=2,
             beta="1.5", noise="0.01", digits=DIGITS):
    """A seeded random ScenarioFile document with coordinates in [0, 1]^dim.

    layout "grid-tx" puts sqrt(n) x sqrt(n) transmitters on a grid; "grid-rx"
    puts the receivers on an m x m grid.  Every receiver keeps distance at
    least ``min_sep`` from every transmitter.
    """
    rng = np.random.default_rng(seed)
    top = 10**digits
    sep = float(as_fraction(min_sep))
    if n < 1 or m < 0:
        raise ScenarioError("need n >= 1 transmitters and m >= 0 receivers")
    if layout not in ("random", "grid-tx", "grid-rx"):
        raise ScenarioError(f"unknown layout {layout!r}")
    if layout != "random" and dim != 2:
        raise ScenarioError(f"layout {layout} needs dimension 2")
    lat = lambda k: _lattice(k, digits)  # noqa: E731
    grid_rx = None
    if layout == "grid-tx":
        side = math.isqrt(n)
        if side * side != n:
            raise ScenarioError(f"grid-tx needs a square transmitter count, got {n}")
        xs = _distinct_ints(rng, side, top)
        ys = _distinct_ints(rng, side, top)
        tpos = np.array([(x, y) for x in xs for y in ys], dtype=np.int64)
    elif layout == "grid-rx":
        xs = _distinct_ints(rng, m, top)
        ys = _distinct_ints(rng, m, top)
        grid_rx = (xs, ys)
        gpts = np.array([(x, y) for x in xs for y in ys], dtype=np.int64).reshape(-1, 2)
        tpos = _far_points(rng, n, 2, top, gpts, sep)
    else:
        tpos = _far_points(rng, n, dim, top, np.empty((0, dim)), 0.0)
    if power == "uniform":
        powers = ["1"] * n
    elif power == "random":
        powers = [_lattice(k, 3) for k in rng.integers(500, 2001, size=n)]
    else:
        raise ScenarioError(f"unknown power mode {power!r}")
    doc = {
        "alpha": int(alpha),
        "beta": str(beta),
        "noise": str(noise),
        "dimension": dim,
        "transmitters": [{"pos": [lat(c) for c in p], "power": pw} for p, pw in zip(tpos.tolist(), powers)],
    }
    if grid_rx is not None:
        doc["receivers"] = {"grid": {"xs": [lat(x) for x in grid_rx[0]], "ys": [lat(y) for y in grid_rx[1]]}}
    else:
        rpos = _far_points(rng, m, dim, top, tpos, sep)
        doc["receivers"] = [[lat(c) for c in p] for p in rpos.tolist()]
    return doc


def to_json(doc):
    return json.dumps(doc, separators=(",", ":")) + "\n"
