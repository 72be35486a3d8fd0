"""Independent reference implementations used as oracles by the tests.

Each oracle recomputes a quantity from its definition by a route deliberately
different from the library code: explicit loops instead of vectorized
algebra, from-scratch recomputation instead of recurrences, exhaustive
enumeration instead of an optimizing solver.
"""

import itertools

import numpy as np
from scipy.spatial.distance import cdist

from specens.graph import SimilarityGraph, similarity


def brute_nm(assign, mat):
    """Modularity-based diversity score by a literal double loop.

    The edge indicator gamma_ij is 1 iff mat_ij is nonzero, sigma_i counts
    the nonzero entries in column i, and z is the total nonzero-cell count.
    Sums run over all ordered pairs including the diagonal. Returns the raw
    score without clamping.
    """
    n = mat.shape[0]
    gamma = (mat != 0).astype(float)
    sigma = gamma.sum(axis=0)
    z = float(sigma.sum())
    total = 0.0
    for i in range(n):
        for j in range(n):
            if assign[i] == assign[j]:
                total += gamma[i, j] - sigma[i] * sigma[j] / (2.0 * z)
    return 0.5 + total / (4.0 * z)


def newman_q(adj, assign, mass=None):
    """Newman modularity Q = sum over communities of (e_c - d_c^2).

    e_c is the share of total cell weight falling inside community c and d_c
    the share incident to it, both relative to ``mass`` (the "2m" slot).
    ``mass`` defaults to adj.sum(), the textbook choice for a symmetric
    matrix. Callers checking the diversity-score identity pass twice the
    cell count instead: the score subtracts sigma_i*sigma_j/(2z) inside the
    sum and divides by 4z outside, and both match the community-sum form of
    Q only at mass 2z.
    """
    mass = float(adj.sum()) if mass is None else float(mass)
    q = 0.0
    for c in np.unique(assign):
        idx = np.flatnonzero(assign == c)
        e_c = adj[np.ix_(idx, idx)].sum() / mass
        d_c = adj[idx, :].sum() / mass
        q += e_c - d_c * d_c
    return q


def naive_upgma(diss):
    """Average-linkage merge list with every height recomputed from scratch.

    Clusters carry the usual ids (originals are 0..n-1, the merge at step s
    creates id n+s). A candidate height is the plain mean of the original
    dissimilarities over all cross pairs; the smallest wins, ties going to
    the smallest (id_a, id_b) pair.
    """
    n = diss.shape[0]
    clusters = {i: [i] for i in range(n)}
    merges = []
    for step in range(n - 1):
        best = None
        ids = sorted(clusters)
        for pos, a in enumerate(ids):
            for b in ids[pos + 1:]:
                cross = [diss[p, q] for p in clusters[a] for q in clusters[b]]
                height = sum(cross) / len(cross)
                if best is None or height < best[0]:
                    best = (height, a, b)
        height, a, b = best
        clusters[n + step] = clusters.pop(a) + clusters.pop(b)
        merges.append((a, b, float(height)))
    return merges


def brute_accuracy(pred, truth):
    """Best relabeling accuracy by enumerating every one-to-one assignment."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    k = int(max(p.max(), t.max())) + 1
    confusion = np.zeros((k, k), dtype=int)
    for a, b in zip(p, t):
        confusion[a, b] += 1
    best = 0
    for perm in itertools.permutations(range(k)):
        matched = sum(confusion[r, perm[r]] for r in range(k))
        best = max(best, matched)
    return best / pred.size


def graph_components(adj):
    """Connected-component labels of a boolean adjacency by graph traversal."""
    n = adj.shape[0]
    labels = np.full(n, -1, dtype=int)
    current = 0
    for start in range(n):
        if labels[start] >= 0:
            continue
        labels[start] = current
        stack = [start]
        while stack:
            node = stack.pop()
            for other in np.flatnonzero(adj[node]):
                if labels[other] < 0:
                    labels[other] = current
                    stack.append(other)
        current += 1
    return labels


def best_direction_variance(points, n_angles=20000):
    """Largest population variance of any 1-d projection of 2-d points.

    Grid search over direction angles; the resolution error is quadratic in
    the angle step, far below the tolerances it is compared at.
    """
    theta = np.linspace(0.0, np.pi, n_angles, endpoint=False)
    directions = np.column_stack([np.cos(theta), np.sin(theta)])
    proj = points @ directions.T
    return float(proj.var(axis=0).max())


def co_membership(assign):
    """Boolean same-cluster matrix of a label vector."""
    assign = np.asarray(assign)
    return assign[:, None] == assign[None, :]


def cloud_graph(n, dims, t, seed, spread=1.0):
    """Similarity graph of a random Gaussian point cloud (a test input builder)."""
    rng = np.random.default_rng(seed)
    points = rng.normal(0.0, spread, (n, dims))
    return similarity(cdist(points, points), t)


def block_graph(block_sizes, seed, within=None):
    """Disconnected graph assembled from independent per-block cloud graphs.

    Each block is a cloud graph over its own points with enough neighbors to
    be connected (t of at least half the block), so the component count of
    the result equals the number of blocks. Returns the graph and the
    ground-truth component labels.
    """
    blocks = []
    phis = []
    ts = []
    for b, size in enumerate(block_sizes):
        t = min(size - 1, size // 2 + 1)
        g = cloud_graph(size, 2, t, seed + 101 * b)
        blocks.append(g.s)
        phis.append(g.phi)
        ts.append(g.t)
    total = sum(block_sizes)
    s = np.zeros((total, total))
    labels = np.empty(total, dtype=int)
    offset = 0
    for b, block in enumerate(blocks):
        size = block.shape[0]
        s[offset:offset + size, offset:offset + size] = block
        labels[offset:offset + size] = b
        offset += size
    return SimilarityGraph(s, max(ts), np.concatenate(phis)), labels
