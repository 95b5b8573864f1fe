"""Fitting and out-of-sample projection of the 2D map layout.

``fit`` builds the neighborhood graph, fits the low-dimensional similarity
curve, and runs per-edge stochastic gradient descent with negative sampling
from a seeded random initialization.  ``transform`` projects a new vector
as the membership-weighted mean of its nearest training points' fitted
coordinates, which keeps search projection deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import pow as fpow
from typing import Optional

import numpy as np

from ..errors import DimensionMismatch, NonFiniteInput, TooFewPoints
from . import get_layout_backend
from .curve import fit_curve_params
from .fuzzy import FuzzyGraph, fuzzy_simplicial_set, smooth_knn_sigma
from .knn import METRICS, distances_to, knn_graph

INIT_RANGE = 10.0


@dataclass(frozen=True)
class ReducerParams:
    n_neighbors: int = 15
    min_dist: float = 0.1
    spread: float = 1.0
    n_epochs: Optional[int] = None  # resolved at fit: 200 if n <= 10000 else 500
    negative_sample_rate: int = 5
    metric: str = "cosine"
    seed: int = 42

    def __post_init__(self):
        if self.n_neighbors < 2:
            raise ValueError("n_neighbors must be >= 2")
        if not 0.0 < self.min_dist < self.spread:
            raise ValueError("require 0 < min_dist < spread")
        if self.n_epochs is not None and self.n_epochs < 1:
            raise ValueError("n_epochs must be positive")
        if self.negative_sample_rate < 1:
            raise ValueError("negative_sample_rate must be positive")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")

    def resolved(self, n: int) -> "ReducerParams":
        if self.n_epochs is not None:
            return self
        return replace(self, n_epochs=200 if n <= 10000 else 500)


@dataclass(frozen=True)
class ReducerModel:
    params: ReducerParams
    training_vectors: np.ndarray  # (n, d) float32
    coords: np.ndarray            # (n, 2) float32
    curve_a: float
    curve_b: float
    version: int = 1

    @property
    def n(self) -> int:
        return self.training_vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.training_vectors.shape[1]

    def _kernel_stats(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-training-point (rho, sigma), recomputed lazily; not serialized."""
        cached = self.__dict__.get("_stats")
        if cached is None:
            idx, dists = knn_graph(
                self.training_vectors.astype(np.float64),
                self.params.n_neighbors,
                self.params.metric,
            )
            target = np.log2(self.params.n_neighbors)
            rho = dists[:, 0].copy()
            sigma = np.array(
                [smooth_knn_sigma(dists[i], rho[i], target) for i in range(self.n)]
            )
            cached = (rho, sigma)
            object.__setattr__(self, "_stats", cached)
        return cached


def attractive_gradient(a: float, b: float, y_i: np.ndarray, y_j: np.ndarray) -> np.ndarray:
    """Analytic gradient w.r.t. y_i of log(1 / (1 + a * d^(2b))), d = |y_i - y_j|."""
    diff = np.asarray(y_i, dtype=np.float64) - np.asarray(y_j, dtype=np.float64)
    dsq = float(np.dot(diff, diff))
    if dsq == 0.0:
        return np.zeros_like(diff)
    coeff = (-2.0 * a * b * fpow(dsq, b - 1.0)) / (a * fpow(dsq, b) + 1.0)
    return coeff * diff


def attractive_log_likelihood(a: float, b: float, y_i: np.ndarray, y_j: np.ndarray) -> float:
    diff = np.asarray(y_i, dtype=np.float64) - np.asarray(y_j, dtype=np.float64)
    dsq = float(np.dot(diff, diff))
    return float(-np.log1p(a * fpow(dsq, b)))


def make_epochs_per_sample(weights: np.ndarray, n_epochs: int) -> np.ndarray:
    """Stronger edges are sampled every epoch; weaker ones proportionally less."""
    return weights.max() / weights


def fit(vectors: np.ndarray, params: ReducerParams) -> ReducerModel:
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[1] < 1:
        raise NonFiniteInput("expected an (n, d) matrix with d >= 1")
    if not np.all(np.isfinite(vectors)):
        raise NonFiniteInput("training vectors contain NaN or Inf")
    n = vectors.shape[0]
    if n < params.n_neighbors + 1:
        raise TooFewPoints(
            f"need at least n_neighbors+1={params.n_neighbors + 1} points, got {n}"
        )
    params = params.resolved(n)

    idx, dists = knn_graph(vectors, params.n_neighbors, params.metric)
    graph = fuzzy_simplicial_set(idx, dists, params.n_neighbors)
    a, b = fit_curve_params(params.min_dist, params.spread)

    rng = np.random.RandomState(params.seed & 0xFFFFFFFF)
    embedding = rng.uniform(-INIT_RANGE, INIT_RANGE, size=(n, 2)).astype(np.float64)
    embedding = np.ascontiguousarray(embedding)

    eps = make_epochs_per_sample(graph.weights, params.n_epochs)
    backend = get_layout_backend()
    backend.optimize_layout(
        embedding,
        graph.rows,
        graph.cols,
        eps,
        params.n_epochs,
        a,
        b,
        float(params.negative_sample_rate),
        params.seed & 0xFFFFFFFFFFFFFFFF,
    )
    if not np.all(np.isfinite(embedding)):
        raise NonFiniteInput("layout diverged to non-finite coordinates")

    return ReducerModel(
        params=params,
        training_vectors=vectors.astype(np.float32),
        coords=embedding.astype(np.float32),
        curve_a=a,
        curve_b=b,
    )


def transform(model: ReducerModel, vector, k: Optional[int] = None) -> tuple[float, float]:
    query = np.asarray(vector, dtype=np.float64)
    if query.ndim != 1 or query.shape[0] != model.dim:
        raise DimensionMismatch(
            f"query has dimension {query.shape}, model expects ({model.dim},)"
        )
    k = k or model.params.n_neighbors
    rho, sigma = model._kernel_stats()
    train = model.training_vectors.astype(np.float64)
    dists = distances_to(train, query, model.params.metric)
    order = np.argsort(dists, kind="stable")[:k]
    weights = np.exp(-np.maximum(dists[order] - rho[order], 0.0) / sigma[order])
    total = weights.sum()
    if total == 0.0:
        weights = np.full(len(order), 1.0 / len(order))
    else:
        weights = weights / total
    point = weights @ model.coords[order].astype(np.float64)
    return float(point[0]), float(point[1])
