"""Exact brute-force k-nearest-neighbor search.

Desk-scale corpora (<= ~20k points) make the O(n^2 d) scan acceptable and
keep the result exact, which the layout's neighborhood graph depends on.
"""

from __future__ import annotations

import numpy as np

from ..errors import NonFiniteInput, TooFewPoints

METRICS = ("cosine", "euclidean")


def pairwise_distances(vectors: np.ndarray, metric: str) -> np.ndarray:
    if metric == "euclidean":
        sq = np.sum(vectors**2, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (vectors @ vectors.T)
        np.maximum(d2, 0.0, out=d2)
        return np.sqrt(d2)
    if metric == "cosine":
        norms = np.linalg.norm(vectors, axis=1)
        norms[norms == 0.0] = 1.0
        unit = vectors / norms[:, None]
        return np.clip(1.0 - unit @ unit.T, 0.0, 2.0)
    raise ValueError(f"unknown metric {metric!r}")


def distances_to(vectors: np.ndarray, query: np.ndarray, metric: str) -> np.ndarray:
    if metric == "euclidean":
        return np.linalg.norm(vectors - query[None, :], axis=1)
    if metric == "cosine":
        norms = np.linalg.norm(vectors, axis=1)
        norms[norms == 0.0] = 1.0
        qnorm = np.linalg.norm(query) or 1.0
        return np.clip(1.0 - (vectors @ query) / (norms * qnorm), 0.0, 2.0)
    raise ValueError(f"unknown metric {metric!r}")


def knn_graph(vectors: np.ndarray, k: int, metric: str = "euclidean"):
    """Exact kNN: per node, k neighbor ids (self excluded) by ascending distance.

    Returns (indices, distances) of shape (n, k).  Ties break on the lower
    index, so the result is fully deterministic.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    n = vectors.shape[0]
    if k < 2 and k != 1:
        raise ValueError("k must be >= 1")
    if n <= k:
        raise TooFewPoints(f"need more than k={k} points, got n={n}")
    if not np.all(np.isfinite(vectors)):
        raise NonFiniteInput("input vectors contain NaN or Inf")

    dmat = pairwise_distances(vectors, metric)
    np.fill_diagonal(dmat, np.inf)
    order = np.argsort(dmat, axis=1, kind="stable")[:, :k]
    dists = np.take_along_axis(dmat, order, axis=1)
    return order.astype(np.int32), dists
