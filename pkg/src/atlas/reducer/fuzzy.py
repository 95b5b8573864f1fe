"""Weighted neighborhood graph (fuzzy simplicial set) construction.

Each point gets a local kernel: rho is the distance to its nearest
neighbor, sigma a bandwidth found by binary search so the kernel's total
membership mass equals log2(k).  Directed memberships are then symmetrized
with the probabilistic t-conorm w + w' - w*w'.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

SIGMA_TOL = 1e-5
SIGMA_ITERATIONS = 64
MIN_SIGMA = 1e-12


@dataclass(frozen=True)
class FuzzyGraph:
    n: int
    rows: np.ndarray      # int32, directed edge sources (symmetrized, both directions)
    cols: np.ndarray      # int32
    weights: np.ndarray   # float64 in (0, 1]
    rho: np.ndarray       # float64 per node
    sigma: np.ndarray     # float64 per node


def smooth_knn_sigma(dists: np.ndarray, rho: float, target: float) -> float:
    """Binary-search sigma so sum_j exp(-max(0, d_j - rho)/sigma) = target."""
    shifted = np.maximum(dists - rho, 0.0)

    def mass(sigma: float) -> float:
        return float(np.sum(np.exp(-shifted / sigma)))

    lo, hi = 0.0, 1.0
    while mass(hi) < target and hi < 1e12:
        hi *= 2.0
    mid = hi
    for _ in range(SIGMA_ITERATIONS):
        mid = (lo + hi) / 2.0
        psum = mass(mid)
        if abs(psum - target) < SIGMA_TOL:
            break
        if psum > target:
            hi = mid
        else:
            lo = mid
    return max(mid, MIN_SIGMA)


def fuzzy_simplicial_set(indices: np.ndarray, dists: np.ndarray,
                         n_neighbors: int) -> FuzzyGraph:
    n, k = indices.shape
    target = np.log2(n_neighbors)
    rho = dists[:, 0].astype(np.float64).copy()
    sigma = np.empty(n, dtype=np.float64)
    weights = np.empty((n, k), dtype=np.float64)
    for i in range(n):
        sigma[i] = smooth_knn_sigma(dists[i], rho[i], target)
        weights[i] = np.exp(-np.maximum(dists[i] - rho[i], 0.0) / sigma[i])

    rows = np.repeat(np.arange(n, dtype=np.int64), k)
    cols = indices.astype(np.int64).ravel()
    directed = sp.coo_matrix((weights.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    transpose = directed.T.tocsr()
    combined = directed + transpose - directed.multiply(transpose)
    combined.setdiag(0.0)
    combined.eliminate_zeros()
    # t-conorm arithmetic can overshoot 1.0 by an ulp; weights live in (0, 1]
    np.minimum(combined.data, 1.0, out=combined.data)
    coo = combined.tocoo()
    return FuzzyGraph(
        n=n,
        rows=coo.row.astype(np.int32),
        cols=coo.col.astype(np.int32),
        weights=coo.data.astype(np.float64),
        rho=rho,
        sigma=sigma,
    )
