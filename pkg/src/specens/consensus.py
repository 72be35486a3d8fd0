"""Evidence accumulation across ensemble members and the final linkage cut.

Co-association matrices record, for every pair of instances, how much of the
ensemble put them in the same cluster; the weighted variant lets each member
vote with its diversity score. The consensus partition is an average-linkage
cut of the complemented co-association.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ContractError
from .tksc import PartitionalResult


@dataclass(frozen=True)
class EnsembleMember:
    """One base partition plus its vote weight in [0, 1]."""

    partition: PartitionalResult
    weight: float

    def __post_init__(self):
        w = float(self.weight)
        if not math.isfinite(w) or not 0.0 <= w <= 1.0:
            raise ContractError(f"member weight must be finite in [0, 1], got {self.weight}")


@dataclass(frozen=True, eq=False)
class CoAssociationMatrix:
    xi: np.ndarray

    @property
    def n(self) -> int:
        return self.xi.shape[0]


def _stacked_assignments(members) -> np.ndarray:
    if not members:
        raise ContractError("need at least one ensemble member")
    n = members[0].partition.assign.shape[0]
    for t, member in enumerate(members):
        if member.partition.assign.shape[0] != n:
            raise ContractError(f"member {t} covers {member.partition.assign.shape[0]} instances, expected {n}")
    return np.stack([member.partition.assign for member in members])


def weac(members) -> CoAssociationMatrix:
    """Weighted co-association: each member votes with its weight, divided by the member count."""
    assigns = _stacked_assignments(members)
    xi = np.zeros((assigns.shape[1], assigns.shape[1]))
    for row, member in zip(assigns, members):
        xi += member.weight * (row[:, None] == row[None, :])
    xi /= len(members)
    return CoAssociationMatrix(xi)


def eac(members) -> CoAssociationMatrix:
    """Plain evidence accumulation: the fraction of members co-clustering each pair."""
    assigns = _stacked_assignments(members)
    xi = np.zeros((assigns.shape[1], assigns.shape[1]))
    for row in assigns:
        xi += row[:, None] == row[None, :]
    xi /= len(members)
    return CoAssociationMatrix(xi)


def upgma_merges(diss: np.ndarray) -> list[tuple[int, int, float]]:
    """Full average-linkage merge sequence over a symmetric dissimilarity matrix.

    Cluster ids follow the usual convention: originals are 0..n-1 and the
    cluster born at step s gets id n+s. Cluster distances are size-weighted
    averages, which equals the mean pairwise dissimilarity between the merged
    groups. Ties on the merge distance pick the lexicographically smallest
    active (i, j) id pair.
    """
    n = diss.shape[0]
    total = 2 * n - 1
    d = np.full((total, total), np.inf)
    block = np.array(diss, dtype=float)
    block[np.tril_indices(n)] = np.inf
    d[:n, :n] = block
    sizes = np.zeros(total, dtype=int)
    sizes[:n] = 1
    active = list(range(n))
    merges = []
    for step in range(n - 1):
        act = np.array(active)
        sub = d[np.ix_(act, act)]
        flat = int(sub.argmin())
        left, right = int(act[flat // act.size]), int(act[flat % act.size])
        height = float(d[left, right])
        new = n + step
        active.remove(left)
        active.remove(right)
        rest = np.array(active, dtype=int)
        if rest.size:
            to_left = d[np.minimum(rest, left), np.maximum(rest, left)]
            to_right = d[np.minimum(rest, right), np.maximum(rest, right)]
            d[rest, new] = (sizes[left] * to_left + sizes[right] * to_right) / (sizes[left] + sizes[right])
        sizes[new] = sizes[left] + sizes[right]
        active.append(new)
        merges.append((left, right, height))
    return merges


def cut_merges(merges, n: int, k: int) -> np.ndarray:
    """Labels after applying the first n - k merges; clusters numbered by smallest member."""
    groups = {i: [i] for i in range(n)}
    for step in range(n - k):
        left, right, _ = merges[step]
        groups[n + step] = groups.pop(left) + groups.pop(right)
    assign = np.empty(n, dtype=int)
    for label, members in enumerate(sorted(groups.values(), key=min)):
        assign[members] = label
    return assign


def average_linkage_cut(co: CoAssociationMatrix, k: int) -> PartitionalResult:
    """Cut the average-linkage dendrogram of (max(xi) - xi) at k clusters."""
    n = co.xi.shape[0]
    if not 2 <= k <= n:
        raise ConfigError(f"final cluster count k={k} outside [2, {n}]")
    diss = co.xi.max() - co.xi
    return PartitionalResult(cut_merges(upgma_merges(diss), n, k), k)


def save_coassociation_csv(co: CoAssociationMatrix, path) -> None:
    np.savetxt(path, co.xi, delimiter=",")


def save_merges_csv(merges, path) -> None:
    """Write the dendrogram as (step, left, right, height) rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "left", "right", "height"])
        for step, (left, right, height) in enumerate(merges):
            writer.writerow([step, left, right, repr(height)])
