"""Von Neumann entropy, relative entropies and chi-quantities.

All quantities are in nats. +inf is a first-class value (Python ``math.inf``)
propagated through sums; conversion to bits is a presentation concern handled
by the harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, LabelMismatch
from .matcore import SUPPORT_CUTOFF
from .qstate import ClassicalDist, DensityMatrix, fidelity_like_support_check, validate_density

INF = math.inf


@dataclass(frozen=True)
class StateFamily:
    """Weighted family of density matrices on a common Hilbert space."""

    weights: ClassicalDist
    members: tuple

    def __post_init__(self):
        members = tuple(self.members)
        if len(members) != len(self.weights.labels):
            raise LabelMismatch("weights and members differ in length")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise DimensionMismatch(f"members have inconsistent dims {dims}")
        object.__setattr__(self, "members", members)

    def barycenter(self) -> DensityMatrix:
        mix = sum(w * m.mat for w, m in zip(self.weights.probs, self.members))
        return validate_density(mix)


def vn_entropy(rho: DensityMatrix, cutoff: float = SUPPORT_CUTOFF) -> float:
    vals = rho.spectral().eigenvalues
    return float(-sum(v * math.log(v) for v in vals if v > cutoff))


def q_rel_entropy(
    sigma: DensityMatrix, tau: DensityMatrix, cutoff: float = SUPPORT_CUTOFF
) -> float:
    """Tr{sigma (log sigma - log tau)}, +inf when supp(sigma) leaves supp(tau).

    Evaluated through both spectral decompositions:
    sum_j l_j log l_j - sum_{jk} l_j |<u_j|v_k>|^2 log m_k,
    exact on the supports without forming log of a matrix difference.
    """
    if sigma.dim != tau.dim:
        raise DimensionMismatch(f"dims {sigma.dim} and {tau.dim} differ")
    if not fidelity_like_support_check(sigma, tau, cutoff):
        return INF
    svals, svecs = sigma.spectral()
    tvals, tvecs = tau.spectral()
    overlap = np.abs(svecs.conj().T @ tvecs) ** 2  # [j, k]
    total = 0.0
    for j, lj in enumerate(svals):
        if lj <= cutoff:
            continue
        total += lj * math.log(lj)
        for k, mk in enumerate(tvals):
            w = overlap[j, k]
            if mk > cutoff:
                total -= lj * w * math.log(mk)
            elif lj * w > cutoff:
                return INF  # residual weight on the kernel of tau
    return total


def c_rel_entropy(p: ClassicalDist, q: ClassicalDist, cutoff: float = SUPPORT_CUTOFF) -> float:
    """Kullback-Leibler divergence, with 0 log(0/q) = 0."""
    if p.labels != q.labels:
        raise LabelMismatch("distributions live on different label sets")
    total = 0.0
    for pj, qj in zip(p.probs, q.probs):
        if pj <= cutoff:
            continue
        if qj <= cutoff:
            return INF
        total += pj * math.log(pj / qj)
    return total


def mixed_rel_entropy(
    f1: tuple[ClassicalDist, Sequence[DensityMatrix]],
    f2: tuple[ClassicalDist, Sequence[DensityMatrix]],
    cutoff: float = SUPPORT_CUTOFF,
) -> float:
    """Relative entropy of two classical/quantum families:
    S_c(P1|P2) + sum_w P1(w) S_q(s1(w)|s2(w))."""
    p1, states1 = f1
    p2, states2 = f2
    if p1.labels != p2.labels:
        raise LabelMismatch("families live on different label sets")
    if len(states1) != len(p1.labels) or len(states2) != len(p2.labels):
        raise LabelMismatch("state count does not match label count")
    dims = {s.dim for s in list(states1) + list(states2)}
    if len(dims) != 1:
        raise DimensionMismatch(f"states have inconsistent dims {dims}")
    total = c_rel_entropy(p1, p2, cutoff)
    if math.isinf(total):
        return INF
    for w, s1, s2 in zip(p1.probs, states1, states2):
        if w <= cutoff:
            continue
        term = q_rel_entropy(s1, s2, cutoff)
        if math.isinf(term):
            return INF
        total += w * term
    return total


def chi_quantity(f: StateFamily, cutoff: float = SUPPORT_CUTOFF) -> float:
    """Mean quantum relative entropy of the members to their barycenter."""
    sigma = f.barycenter()
    return chi_against(f.weights.probs, f.members, sigma, cutoff)


def chi_against(
    weights: np.ndarray,
    members: Sequence[DensityMatrix],
    sigma: DensityMatrix,
    cutoff: float = SUPPORT_CUTOFF,
) -> float:
    """sum_b w_b S_q(tau_b | sigma) with an explicit reference state."""
    total = 0.0
    for w, m in zip(weights, members):
        if w <= cutoff:
            continue
        term = q_rel_entropy(m, sigma, cutoff)
        if math.isinf(term):
            return INF
        total += w * term
    return total
