"""Numeric backends: exact rationals or IEEE-754 binary64."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


class Kind(enum.Enum):
    EXACT = "exact"
    FLOAT64 = "f64"


@dataclass(frozen=True)
class Backend:
    """Arithmetic backend plus the relative error budget used for guard bands.

    ``tau`` is zero for the exact backend, which never rounds.
    """

    kind: Kind
    tau: float = 0.0

    @property
    def exact(self) -> bool:
        return self.kind is Kind.EXACT

    @property
    def name(self) -> str:
        return self.kind.value

    def __post_init__(self):
        if self.kind is Kind.EXACT and self.tau != 0.0:
            raise ValueError("the exact backend has no rounding budget")
        if self.tau < 0:
            raise ValueError("tau must be non-negative")


EXACT = Backend(Kind.EXACT, 0.0)
FLOAT64 = Backend(Kind.FLOAT64, 1e-6)


def get_backend(name) -> Backend:
    if isinstance(name, Backend):
        return name
    key = str(name).lower()
    if key in ("exact", "q", "rational"):
        return EXACT
    if key in ("f64", "float64", "float", "double"):
        return FLOAT64
    raise ValueError(f"unknown backend {name!r}")


def as_fraction(value) -> Fraction:
    """Exact rational for a decimal string, int, Fraction or float.

    Floats go through their shortest repr, so ``0.1`` becomes 1/10 rather
    than the binary value nearest to it.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    # numpy scalars and the like
    if hasattr(value, "item"):
        return as_fraction(value.item())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")
