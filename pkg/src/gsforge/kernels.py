"""Select the tableau kernel backend once, at import time.

The compiled module is used when it was built; setting ``GSF_PURE_PYTHON=1``
forces the pure-Python implementation.
"""

from __future__ import annotations

import os

from gsforge import _pykernels

if os.environ.get("GSF_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from gsforge import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND: str = _impl.BACKEND
rref = _impl.rref
back_substitute = _impl.back_substitute
graph_adjacency = _impl.graph_adjacency
product_sign = _pykernels.product_sign
rowsum = _pykernels.rowsum
gf2_rank = _pykernels.gf2_rank

__all__ = ["BACKEND", "rref", "back_substitute", "graph_adjacency", "product_sign", "rowsum", "gf2_rank"]
