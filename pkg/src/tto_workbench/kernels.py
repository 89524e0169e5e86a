"""Grid kernels: Blaschke evaluation and the Takenaka-Malmquist table.

The compiled extension is preferred; set ``TTO_PURE_PYTHON=1`` to force the
numpy fallback (the benchmark and the parity tests do this).
"""

import os

from . import _kernels_py

BACKEND = "python"
blaschke_grid = _kernels_py.blaschke_grid
tm_table = _kernels_py.tm_table

if not os.environ.get("TTO_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        BACKEND = "compiled"
        blaschke_grid = _compiled.blaschke_grid
        tm_table = _compiled.tm_table

__all__ = ["BACKEND", "blaschke_grid", "tm_table"]
