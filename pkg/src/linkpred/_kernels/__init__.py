"""Kernel backend selection: compiled extension if available, numpy fallback otherwise.

Set LINKPRED_PURE_PYTHON=1 to force the fallback (used by the benchmark and
for debugging).
"""
import os

from . import pure

if os.environ.get("LINKPRED_PURE_PYTHON", "") not in ("", "0"):
    _impl = pure
    BACKEND = "python"
else:
    try:
        from . import _simcore as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "python"

node_similarity_batch = _impl.node_similarity_batch
