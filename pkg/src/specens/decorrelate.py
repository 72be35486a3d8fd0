"""Correlation-removing linear map.

Center the data, eigendecompose the population covariance of the features,
optionally keep only the top-variance directions, and project. With all
directions kept the map is a rotation, so pairwise distances are unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, NumericError


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Orthonormal eigenvector columns with their descending eigenvalues.

    ``d`` echoes the requested retention count; 0 means all directions kept.
    """

    q: np.ndarray
    eigenvalues: np.ndarray
    d: int


@dataclass(frozen=True, eq=False)
class MappedData:
    """Projected data, one column per instance, plus the basis and the subtracted mean."""

    y: np.ndarray
    basis: EigenBasis
    mean: np.ndarray

    @property
    def n(self) -> int:
        return self.y.shape[1]


def largest_entry_positive(vectors: np.ndarray) -> np.ndarray:
    """Flip eigenvector columns so each column's largest-magnitude entry is positive."""
    lead = np.abs(vectors).argmax(axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def fit_map(ds: Dataset, d: int = 0) -> MappedData:
    """Project instances onto the top ``d`` covariance eigenvectors (0 keeps all).

    Eigenvalues are sorted in descending order; equal eigenvalues keep the
    solver's original column order, so the result is deterministic.
    """
    n, m = ds.features.shape
    if not 0 <= d <= m:
        raise ConfigError(f"retained direction count d={d} outside [0, {m}]")
    mean = ds.features.mean(axis=0)
    x = (ds.features - mean).T  # features by instances
    cov = (x @ x.T) / n
    cov = (cov + cov.T) / 2.0  # scrub float asymmetry before the solve
    try:
        lam, q = np.linalg.eigh(cov)
    except np.linalg.LinAlgError as err:
        raise NumericError(
            f"covariance eigendecomposition failed: {err}; "
            f"trace={np.trace(cov):.6e} max |entry|={np.abs(cov).max():.6e}"
        ) from err
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    q = largest_entry_positive(q[:, order])
    keep = d if d > 0 else m
    q = q[:, :keep]
    lam = lam[:keep]
    return MappedData(q.T @ x, EigenBasis(q, lam, d), mean)
