"""Exact and binary64 polynomial algebra."""

from .backend import EXACT, FLOAT64, Backend, Kind, as_fraction, get_backend
from .bivariate import (
    BiPolynomial,
    BiRationalFunction,
    bifrac_grid_eval,
    bifrac_sum,
    bipoly_grid_eval,
    bipoly_grid_interpolate,
    bipoly_mul,
)
from .univariate import (
    Polynomial,
    RationalFunction,
    ValueTable,
    frac_add,
    frac_eval_batch,
    frac_sum,
    poly_eval_batch,
    poly_interpolate,
    poly_mul,
)

__all__ = [
    "EXACT", "FLOAT64", "Backend", "Kind", "as_fraction", "get_backend",
    "BiPolynomial", "BiRationalFunction", "bifrac_grid_eval", "bifrac_sum",
    "bipoly_grid_eval", "bipoly_grid_interpolate", "bipoly_mul",
    "Polynomial", "RationalFunction", "ValueTable", "frac_add", "frac_eval_batch",
    "frac_sum", "poly_eval_batch", "poly_interpolate", "poly_mul",
]
