"""Dual-kernel spectral pass over a similarity graph.

One call produces two things: a k-means partition of the normalized-Laplacian
embedding, and a max-normalized weighted adjacency ("modular" graph) used
later to score how well a partition matches the graph's structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decorrelate import largest_entry_positive
from .errors import ConfigError, ContractError, DegenerateInputError, NumericError
from .graph import SimilarityGraph

ZERO_ROW_GUARD = 1e-20  # keeps all-zero embedding rows at zero instead of NaN
KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 300


@dataclass(frozen=True, eq=False)
class PartitionalResult:
    """Cluster assignments: every label in [0, n_clusters) occurs at least once."""

    assign: np.ndarray
    n_clusters: int

    def __post_init__(self):
        assign = np.array(self.assign, dtype=int)
        assign.setflags(write=False)
        present = np.unique(assign)
        expected = np.arange(self.n_clusters)
        if present.size != self.n_clusters or (present != expected).any():
            raise ContractError(
                f"assignments must use every label in [0, {self.n_clusters}), got labels {present.tolist()}"
            )
        object.__setattr__(self, "assign", assign)

    @property
    def n(self) -> int:
        return self.assign.shape[0]


@dataclass(frozen=True, eq=False)
class ModularResult:
    """Max-normalized adjacency, per-node neighbor counts, and total cell weight."""

    m: np.ndarray
    degrees: np.ndarray
    z: float


def partitional_kernel(g: SimilarityGraph) -> np.ndarray:
    """Symmetric normalized Laplacian I - D^(-1/2) S D^(-1/2)."""
    degrees = g.s.sum(axis=1)
    dead = np.flatnonzero(degrees <= 0)
    if dead.size:
        raise NumericError(f"nodes with zero similarity degree: {dead.tolist()[:8]}")
    inv_root = 1.0 / np.sqrt(degrees)
    lap = -inv_root[:, None] * g.s * inv_root[None, :]
    np.fill_diagonal(lap, lap.diagonal() + 1.0)
    return (lap + lap.T) / 2.0


def row_normalize(vectors: np.ndarray, guard: float = ZERO_ROW_GUARD) -> np.ndarray:
    """Scale each row to unit length; all-zero rows stay zero thanks to the guard."""
    norms = np.sqrt((vectors * vectors).sum(axis=1))
    return vectors / (norms + guard)[:, None]


def spectral_embed(kernel: np.ndarray, n_clusters: int) -> np.ndarray:
    """Per-instance coordinates in the n_clusters lowest eigenvectors of the kernel.

    Columns are ordered by ascending eigenvalue and sign-fixed so the
    largest-magnitude entry of each is positive; rows are then normalized to
    unit length.
    """
    n = kernel.shape[0]
    if not 2 <= n_clusters <= n:
        raise ConfigError(f"embedding width {n_clusters} outside [2, {n}]")
    try:
        _, vectors = np.linalg.eigh(kernel)
    except np.linalg.LinAlgError as err:
        raise NumericError(f"kernel eigendecomposition failed: {err}") from err
    return row_normalize(largest_entry_positive(vectors[:, :n_clusters]))


def modular_kernel(g: SimilarityGraph) -> ModularResult:
    """Normalize |D - S| by its largest entry and zero the diagonal.

    The result is a weighted adjacency in [0, 1] whose nonzero pattern matches
    the similarity graph. Degrees count nonzero entries per column; z is the
    sum of all cells.
    """
    if not g.s.any():
        raise NumericError("similarity matrix is all zero")
    weighted_degrees = g.s.sum(axis=1)
    lap = np.diag(weighted_degrees) - g.s
    m = np.abs(lap)
    m /= m.max()
    np.fill_diagonal(m, 0.0)
    counts = np.count_nonzero(m, axis=0)
    return ModularResult(m, counts, float(m.sum()))


def _plusplus_centers(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Greedy ++-style seeding: sample far points, keep the best candidate.

    The first center is uniform; each later one is drawn with probability
    proportional to the squared distance from the chosen set, several
    candidates at a time, keeping the candidate that minimizes the resulting
    potential. Distinct seeds give distinct starting configurations.
    """
    n = points.shape[0]
    n_candidates = 2 + int(np.log(k))
    first = int(rng.integers(n))
    picked = [first]
    dist = ((points - points[first]) ** 2).sum(axis=1)
    for _ in range(k - 1):
        probs = dist / dist.sum()
        candidates = rng.choice(n, size=n_candidates, p=probs)
        best = -1
        best_potential = np.inf
        for cand in candidates:
            potential = float(np.minimum(dist, ((points - points[cand]) ** 2).sum(axis=1)).sum())
            if potential < best_potential:
                best_potential = potential
                best = int(cand)
        picked.append(best)
        dist = np.minimum(dist, ((points - points[best]) ** 2).sum(axis=1))
    return points[picked].copy()


def _nearest(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    dist = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return dist.argmin(axis=1)


def _repair_empty(points: np.ndarray, centers: np.ndarray, assign: np.ndarray, k: int) -> np.ndarray:
    """Give each empty cluster the point farthest from its current centroid."""
    missing = [c for c in range(k) if not (assign == c).any()]
    if not missing:
        return assign
    assign = assign.copy()
    dist_own = ((points - centers[assign]) ** 2).sum(axis=1)
    for c in missing:
        counts = np.bincount(assign, minlength=k)
        eligible = counts[assign] > 1
        candidate = int(np.where(eligible, dist_own, -np.inf).argmax())
        assign[candidate] = c
        dist_own[candidate] = -np.inf
    return assign


def kmeans(embedding: np.ndarray, n_clusters: int, seed: int) -> PartitionalResult:
    """Lloyd iterations with greedy ++-style seeding.

    Runs KMEANS_RESTARTS restarts from seeded starting configurations and
    keeps the assignment with the smallest within-cluster sum of squares.
    Empty clusters are repaired by donating the point farthest from its
    centroid. Deterministic for a fixed seed.
    """
    points = np.asarray(embedding, dtype=float)
    n = points.shape[0]
    if not 2 <= n_clusters <= n:
        raise ConfigError(f"cluster count {n_clusters} outside [2, {n}]")
    distinct = np.unique(points, axis=0).shape[0]
    if distinct < n_clusters:
        raise DegenerateInputError(f"only {distinct} distinct points for {n_clusters} clusters")
    rng = np.random.default_rng(seed)
    best_assign = None
    best_wcss = np.inf
    for _ in range(KMEANS_RESTARTS):
        centers = _plusplus_centers(points, n_clusters, rng)
        assign = _repair_empty(points, centers, _nearest(points, centers), n_clusters)
        for _ in range(KMEANS_MAX_ITER):
            centers = np.stack([points[assign == c].mean(axis=0) for c in range(n_clusters)])
            new_assign = _repair_empty(points, centers, _nearest(points, centers), n_clusters)
            if np.array_equal(new_assign, assign):
                break
            assign = new_assign
        wcss = float(((points - centers[assign]) ** 2).sum())
        if wcss < best_wcss:
            best_wcss = wcss
            best_assign = assign
    return PartitionalResult(best_assign, n_clusters)


def tksc(g: SimilarityGraph, n_clusters: int, seed: int) -> tuple[PartitionalResult, ModularResult]:
    """Run both kernels: partition the spectral embedding, return the modular graph too.

    The modular result depends only on the graph, so it is identical across
    calls with different cluster counts or seeds.
    """
    kernel = partitional_kernel(g)
    embedding = spectral_embed(kernel, n_clusters)
    modular = modular_kernel(g)
    partition = kmeans(embedding, n_clusters, seed)
    return partition, modular
