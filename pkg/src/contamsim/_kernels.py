"""Kernel selection: compiled extension when available, numpy otherwise.

Set CONTAMSIM_PURE=1 to force the numpy fallback (used by the kernel
equivalence tests and the benchmark).
"""

import os

from . import _visibility_py

if os.environ.get("CONTAMSIM_PURE") == "1":
    _impl = _visibility_py
    USING_COMPILED = False
else:
    try:
        from . import _visibility as _impl

        USING_COMPILED = True
    except ImportError:
        _impl = _visibility_py
        USING_COMPILED = False

visibility_edges = _impl.visibility_edges
fence_coverage = _impl.fence_coverage
