"""Batched SINR point location with exact polynomial algebra and planar approximations."""

from . import algebra, engine, geometry, kernels
from .algebra import EXACT, FLOAT64, Backend, get_backend
from .engine import (
    EngineReport,
    PtasConfig,
    QuerySet,
    Scenario,
    Verdict,
    VerdictKind,
    approx_batch_2d,
    batch_1d_uniform,
    batch_1d_weighted,
    batch_grid_rx,
    batch_grid_tx,
    choose_k,
    decide_verdict,
    oracle_batch,
    query_grid_tx,
    sin_ratio_direct,
    tilde_f_batch,
)
from .errors import (
    DuplicatePoint,
    EmptyInput,
    EngineMismatch,
    InvalidEps,
    InvalidK,
    PoleAtQuery,
    QueryOnTransmitter,
    ScenarioError,
    SinrError,
)

__version__ = "0.1.0"
