"""Weighted spectral cluster ensembles.

Pipeline: normalize a dataset, decorrelate its features, build a locally
scaled nearest-neighbor similarity graph, run a dual-kernel spectral
clusterer over a range of cluster counts, weight each partition by how well
it matches the graph's structure, accumulate weighted co-association
evidence, and cut the result with average linkage.
"""

from .consensus import CoAssociationMatrix, EnsembleMember, average_linkage_cut, eac, weac
from .dataset import CorruptionSpec, Dataset, corrupt, load_csv, make_half_ring, normalize
from .decorrelate import EigenBasis, MappedData, fit_map
from .diversity import DiversityScore, normalized_modularity
from .evaluation import AccuracyReport, accuracy
from .graph import SimilarityGraph, default_neighbor_count, distance_matrix, similarity
from .harness import RunConfig, RunManifest, run, run_baseline, run_sweep, run_wsce
from .tksc import ModularResult, PartitionalResult, kmeans, modular_kernel, partitional_kernel, spectral_embed

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "CoAssociationMatrix",
    "CorruptionSpec",
    "Dataset",
    "DiversityScore",
    "EigenBasis",
    "EnsembleMember",
    "MappedData",
    "ModularResult",
    "PartitionalResult",
    "RunConfig",
    "RunManifest",
    "SimilarityGraph",
    "accuracy",
    "average_linkage_cut",
    "corrupt",
    "default_neighbor_count",
    "distance_matrix",
    "eac",
    "fit_map",
    "kmeans",
    "load_csv",
    "make_half_ring",
    "modular_kernel",
    "normalize",
    "normalized_modularity",
    "partitional_kernel",
    "run",
    "run_baseline",
    "run_sweep",
    "run_wsce",
    "similarity",
    "spectral_embed",
    "weac",
]
