"""Diversity weight for a partition against the modular graph.

The score is 1/2 plus half the modularity of the partition over the graph's
nonzero pattern: degrees count nonzero entries per column and the total mass
is the nonzero-cell count, so the score depends on which edges exist rather
than on their weights. That keeps it inside [0, 1] for every partition.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, NumericError
from .tksc import ModularResult, PartitionalResult

CLAMP_WARN_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DiversityScore:
    nm: float
    n_clusters: int


def normalized_modularity(partition: PartitionalResult, modular: ModularResult) -> DiversityScore:
    """Score ``partition`` on ``modular``'s adjacency pattern, mapped into [0, 1].

    Sums, over ordered same-cluster pairs including the diagonal, the edge
    indicator minus the expected value sigma_i * sigma_j / (2z), then rescales
    by 1/(4z) and shifts by 1/2. Values outside [0, 1] are clamped; drift
    beyond the float tolerance raises a warning.
    """
    assign = partition.assign
    mat = modular.m
    if assign.shape[0] != mat.shape[0]:
        raise ContractError(f"partition covers {assign.shape[0]} nodes, graph has {mat.shape[0]}")
    sigma = modular.degrees.astype(float)
    z = float(sigma.sum())
    if z <= 0:
        raise NumericError("modular graph has no edges")
    total = 0.0
    for c in range(partition.n_clusters):
        idx = np.flatnonzero(assign == c)
        block = mat[np.ix_(idx, idx)]
        total += np.count_nonzero(block) - sigma[idx].sum() ** 2 / (2.0 * z)
    nm = 0.5 + total / (4.0 * z)
    if nm < 0.0 or nm > 1.0:
        overshoot = max(-nm, nm - 1.0)
        if overshoot > CLAMP_WARN_TOLERANCE:
            warnings.warn(f"normalized modularity clamped by {overshoot:.3e}")
        nm = min(1.0, max(0.0, nm))
    return DiversityScore(float(nm), partition.n_clusters)
