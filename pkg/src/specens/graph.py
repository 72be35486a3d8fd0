"""Pairwise distances and the sparsified, locally scaled similarity graph."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .decorrelate import MappedData
from .errors import ConfigError, NumericError

_BLOCK_ELEMENTS = 4_000_000  # cap on the (rows * n * dims) scratch block


def default_neighbor_count(n: int) -> int:
    """Neighbors kept per node: max(7, ceil(log2 n)), always below n."""
    return min(max(7, math.ceil(math.log2(n))), n - 1)


@dataclass(frozen=True, eq=False)
class SimilarityGraph:
    """Symmetric nonnegative affinities with zero diagonal.

    ``phi`` holds each node's local scale: its distance to the ``t``-th
    nearest neighbor.
    """

    s: np.ndarray
    t: int
    phi: np.ndarray

    @property
    def n(self) -> int:
        return self.s.shape[0]


def distance_matrix(mapped: MappedData) -> np.ndarray:
    """Euclidean distances between instance columns.

    Computed from explicit coordinate differences so the result is exactly
    symmetric with an exactly zero diagonal, in blocks to bound memory.
    """
    points = mapped.y.T
    n, dims = points.shape
    out = np.empty((n, n))
    step = max(1, _BLOCK_ELEMENTS // max(1, n * dims))
    for lo in range(0, n, step):
        diff = points[lo:lo + step, None, :] - points[None, :, :]
        out[lo:lo + step] = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return out


def similarity(a: np.ndarray, t: int, squared: bool = True) -> SimilarityGraph:
    """Gaussian affinities on the union-symmetrized t-nearest-neighbor edges.

    Each kept edge (i, j) gets exp(-a_ij^2 / (phi_i * phi_j)) where phi is the
    per-node local scale, so the kernel adapts to local density. Neighbor ties
    are broken toward the smaller index. ``squared=False`` uses the plain
    distance in the exponent instead of its square.

    Zero local scales (duplicate-heavy data) are replaced by the smallest
    positive scale, with a warning.
    """
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise ConfigError(f"distance matrix must be square, got {a.shape}")
    if not 1 <= t < n:
        raise ConfigError(f"neighbor count t={t} must satisfy 1 <= t < n={n}")
    work = a.copy()
    np.fill_diagonal(work, np.inf)
    nn = np.argsort(work, axis=1, kind="stable")[:, :t]
    phi = work[np.arange(n), nn[:, -1]]
    if (phi == 0).any():
        positive = phi[phi > 0]
        if positive.size == 0:
            raise NumericError("all local scales are zero: every point coincides with its neighbors")
        warnings.warn(f"{int((phi == 0).sum())} zero local scales replaced by {positive.min():.6e}")
        phi = np.where(phi == 0, positive.min(), phi)
    keep = np.zeros((n, n), dtype=bool)
    keep[np.arange(n)[:, None], nn] = True
    keep |= keep.T
    np.fill_diagonal(keep, False)
    expo = a * a if squared else a
    s = np.where(keep, np.exp(-expo / np.outer(phi, phi)), 0.0)
    return SimilarityGraph(s, t, phi)


def save_triples(g: SimilarityGraph, path) -> None:
    """Write the nonzero upper-triangle affinities as (i, j, value) rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "value"])
        rows, cols = np.nonzero(np.triu(g.s))
        for i, j in zip(rows, cols):
            writer.writerow([int(i), int(j), repr(float(g.s[i, j]))])
