"""Eigensolver kernel selection: compiled extension if available, numpy fallback."""

try:
    from ._jacobi import jacobi_sweeps

    BACKEND = "cython"
except ImportError:  # extension not built
    from .jacobi_py import jacobi_sweeps

    BACKEND = "python"

__all__ = ["jacobi_sweeps", "BACKEND"]
