"""Select the compiled kernels when available, else the pure-Python ones.

Set ``HODGECORR_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from hodgecorr import _canon_py

BACKEND = "python"
canonical_leaves = _canon_py.canonical_leaves

if os.environ.get("HODGECORR_PURE_PYTHON", "") in ("", "0"):
    try:
        from hodgecorr import _canon_ext  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        canonical_leaves = _canon_ext.canonical_leaves
        BACKEND = "cython"
