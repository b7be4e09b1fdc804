"""Kernel selection: compiled extension when available, pure Python otherwise.

Set FITCLAMS_PURE_PYTHON=1 to force the fallback (used by the equivalence
tests and the benchmark).
"""

import os

from . import bpe_py

if os.environ.get("FITCLAMS_PURE_PYTHON"):
    bpe = bpe_py
else:
    try:
        from . import _bpe_cy as bpe  # type: ignore[no-redef]
    except ImportError:
        bpe = bpe_py

__all__ = ["bpe", "bpe_py"]
