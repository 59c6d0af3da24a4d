"""Exact certificates for local coordinates on SL(n) character varieties of cusped manifolds."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
