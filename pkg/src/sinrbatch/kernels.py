"""Selects the compiled kernels when available, else the numpy fallback.

Set SINRBATCH_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _pykernels

IMPL = _pykernels
if not os.environ.get("SINRBATCH_PURE_PYTHON"):
    try:
        from . import _ckernels as IMPL  # type: ignore[no-redef]
    except ImportError:  # extension not built
        IMPL = _pykernels

COMPILED = IMPL is not _pykernels

fdivmod_monic = IMPL.fdivmod_monic
fhorner_many = IMPL.fhorner_many
sinr_scan = IMPL.sinr_scan
pair_direct = IMPL.pair_direct
