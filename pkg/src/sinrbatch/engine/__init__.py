"""Batched SINR engines: brute-force oracle, exact 1-D and grid engines, planar approximations."""

from .approx import approx_batch_2d, choose_k, decide_verdict, tilde_f_batch
from .grid import batch_grid_rx, batch_grid_tx, query_grid_tx
from .line import batch_1d_uniform, batch_1d_weighted
from .model import (
    ChannelParams,
    EngineReport,
    PtasConfig,
    QuerySet,
    Scenario,
    Transmitter,
    Verdict,
    VerdictKind,
)
from .oracle import oracle_batch, sin_ratio_direct

__all__ = [
    "ChannelParams", "EngineReport", "PtasConfig", "QuerySet", "Scenario", "Transmitter",
    "Verdict", "VerdictKind",
    "approx_batch_2d", "batch_1d_uniform", "batch_1d_weighted", "batch_grid_rx",
    "batch_grid_tx", "choose_k", "decide_verdict", "oracle_batch", "query_grid_tx",
    "sin_ratio_direct", "tilde_f_batch",
]
