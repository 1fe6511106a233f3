"""Quantum instruments, measurement entropies and information bounds."""

from ._kernels import BACKEND as EIG_BACKEND
from .qstate import ClassicalDist, DensityMatrix, Ensemble, Povm
from .instrument import AposterioriFamily, Instrument, KrausMap

__version__ = "0.1.0"

__all__ = [
    "EIG_BACKEND",
    "ClassicalDist",
    "DensityMatrix",
    "Ensemble",
    "Povm",
    "AposterioriFamily",
    "Instrument",
    "KrausMap",
]
