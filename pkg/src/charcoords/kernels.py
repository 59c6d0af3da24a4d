"""Hot kernels: the compiled extension when built, else the pure-Python fallback.

Set ``CHARCOORDS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

BACKEND = "python"

if os.environ.get("CHARCOORDS_PURE_PYTHON") != "1":
    try:
        from ._kernels import rational_convolve, word_jacobian

        BACKEND = "compiled"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import rational_convolve, word_jacobian

__all__ = ["BACKEND", "rational_convolve", "word_jacobian"]
