"""Density matrices, POVMs, classical distributions and letter-state ensembles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import matcore
from .errors import BadTrace, DimensionMismatch, LabelMismatch, NotPositive

DENSITY_TOL = 1e-10
POVM_SUM_TOL = 1e-9
PROB_TOL = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    """Positive semidefinite unit-trace Hermitian matrix.

    The spectral decomposition is computed once at construction (it doubles as
    the positivity check) and cached for entropy evaluations.
    """

    mat: np.ndarray
    _spec: matcore.SpectralDecomp = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mat = matcore.as_matrix(self.mat)
        matcore.check_hermitian(mat, DENSITY_TOL)
        mat = np.ascontiguousarray(0.5 * (mat + mat.conj().T))
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > DENSITY_TOL:
            raise BadTrace(f"trace {tr} differs from 1 by more than {DENSITY_TOL:.1e}")
        spec = matcore.herm_eig(mat)
        if spec.eigenvalues[0] < -DENSITY_TOL:
            raise NotPositive(f"minimum eigenvalue {spec.eigenvalues[0]:.3e} below -{DENSITY_TOL:.1e}")
        object.__setattr__(self, "_spec", spec)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def spectral(self) -> matcore.SpectralDecomp:
        return self._spec

    def purity(self) -> float:
        return float(np.trace(self.mat @ self.mat).real)


def validate_density(m, tol: float = DENSITY_TOL) -> DensityMatrix:
    """Check/repair a candidate density matrix.

    Eigenvalues in (-tol, 0) are clamped to 0 and the trace renormalized;
    anything more negative is a hard error.
    """
    m = matcore.as_matrix(m)
    matcore.check_hermitian(m, tol)
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > tol:
        raise BadTrace(f"trace {tr} differs from 1 by more than {tol:.1e}")
    vals, vecs = matcore.herm_eig(m)
    if vals[0] < -tol:
        raise NotPositive(f"minimum eigenvalue {vals[0]:.3e} below -{tol:.1e}")
    if vals[0] < 0.0:
        vals = np.maximum(vals, 0.0)
        vals = vals / vals.sum()
        m = (vecs * vals) @ vecs.conj().T
    return DensityMatrix(m)


@dataclass(frozen=True)
class ClassicalDist:
    """Probability distribution over a finite label set."""

    labels: tuple
    probs: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or len(labels) != probs.shape[0]:
            raise LabelMismatch("labels and probabilities differ in length")
        if np.any(probs < -PROB_TOL):
            raise NotPositive(f"negative probability {probs.min():.3e}")
        probs = np.maximum(probs, 0.0)
        if abs(probs.sum() - 1.0) > 1e-10:
            raise BadTrace(f"probabilities sum to {probs.sum()}, not 1")
        probs = probs / probs.sum()
        probs.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, label) -> float:
        return float(self.probs[self.labels.index(label)])


@dataclass(frozen=True)
class Povm:
    """Positive effects summing to the identity."""

    outcomes: tuple
    effects: tuple

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        effects = tuple(matcore.as_matrix(e) for e in self.effects)
        if len(outcomes) != len(effects):
            raise LabelMismatch("outcomes and effects differ in length")
        dims = {e.shape for e in effects}
        if len(dims) != 1:
            raise DimensionMismatch(f"effects have inconsistent shapes {dims}")
        for label, e in zip(outcomes, effects):
            matcore.check_hermitian(e, DENSITY_TOL)
            vals, _ = matcore.herm_eig(e)
            if vals[0] < -DENSITY_TOL:
                raise NotPositive(f"effect {label!r} has eigenvalue {vals[0]:.3e}")
        total = sum(effects)
        dev = np.max(np.abs(total - np.eye(total.shape[0])))
        if dev > POVM_SUM_TOL:
            raise BadTrace(f"effects sum deviates from identity by {dev:.3e}")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "effects", effects)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]


@dataclass(frozen=True)
class Ensemble:
    """Finite alphabet with strictly positive probabilities and one state per letter."""

    letters: tuple
    probs: np.ndarray
    states: tuple

    def __post_init__(self):
        letters = tuple(self.letters)
        probs = np.asarray(self.probs, dtype=np.float64)
        states = tuple(self.states)
        if not (len(letters) == probs.shape[0] == len(states)):
            raise LabelMismatch("letters, probs and states differ in length")
        if np.any(probs <= 0.0):
            raise NotPositive("letter probabilities must be strictly positive")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise BadTrace(f"letter probabilities sum to {probs.sum()}, not 1")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise DimensionMismatch(f"letter states have inconsistent dims {dims}")
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def prior(self) -> ClassicalDist:
        return ClassicalDist(self.letters, self.probs)


def a_priori_state(e: Ensemble) -> DensityMatrix:
    """Barycenter of the ensemble."""
    mix = sum(p * s.mat for p, s in zip(e.probs, e.states))
    return validate_density(mix)


def fidelity_like_support_check(
    sigma: DensityMatrix, tau: DensityMatrix, cutoff: float = matcore.SUPPORT_CUTOFF
) -> bool:
    """True iff supp(sigma) is contained in supp(tau)."""
    if sigma.dim != tau.dim:
        raise DimensionMismatch(f"dims {sigma.dim} and {tau.dim} differ")
    vals, vecs = tau.spectral()
    keep = vals <= cutoff
    if not np.any(keep):
        return True
    comp = vecs[:, keep]  # columns spanning the kernel of tau
    block = comp.conj().T @ sigma.mat @ comp
    return float(np.max(np.abs(block))) <= cutoff


def pure_state(vec: Sequence[complex]) -> DensityMatrix:
    """Density matrix of a (normalized) ket."""
    v = np.asarray(vec, dtype=np.complex128)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()))


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim, dtype=np.complex128) / dim)


def ensemble_to_json(e: Ensemble) -> dict:
    return {
        "letters": list(e.letters),
        "probs": [float(p) for p in e.probs],
        "states": [matcore.matrix_to_json(s.mat) for s in e.states],
    }


def ensemble_from_json(obj: dict) -> Ensemble:
    states = tuple(validate_density(matcore.matrix_from_json(m)) for m in obj["states"])
    return Ensemble(tuple(obj["letters"]), np.array(obj["probs"], dtype=float), states)
