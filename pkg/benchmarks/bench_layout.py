"""Benchmark the compiled layout kernel against the pure-Python fallback.

Both backends must produce bit-identical coordinates; the benchmark asserts
that before reporting timings.

Usage: python3 benchmarks/bench_layout.py [--n 500] [--epochs 200] [--repeat 3]
"""

import argparse
import time

import numpy as np

from atlas.reducer import ReducerParams, get_layout_backend
from atlas.reducer import _sgd_py
from atlas.reducer.curve import fit_curve_params
from atlas.reducer.engine import make_epochs_per_sample
from atlas.reducer.fuzzy import fuzzy_simplicial_set
from atlas.reducer.knn import knn_graph


def build_problem(n, d, n_neighbors, n_epochs, seed):
    rng = np.random.RandomState(seed)
    centers = rng.normal(scale=10.0, size=(5, d))
    vectors = centers[rng.randint(0, 5, size=n)] + rng.normal(size=(n, d))
    idx, dists = knn_graph(vectors, n_neighbors, "euclidean")
    graph = fuzzy_simplicial_set(idx, dists, n_neighbors)
    heads = np.ascontiguousarray(graph.rows, dtype=np.int32)
    tails = np.ascontiguousarray(graph.cols, dtype=np.int32)
    eps = make_epochs_per_sample(graph.weights, n_epochs)
    init = rng.uniform(-10.0, 10.0, size=(n, 2))
    return init, heads, tails, eps


def run(backend, init, heads, tails, eps, n_epochs, a, b, seed):
    embedding = init.copy()
    t0 = time.perf_counter()
    backend.optimize_layout(embedding, heads, tails, eps.copy(), n_epochs,
                            a, b, 5.0, seed)
    return time.perf_counter() - t0, embedding


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=500)
    parser.add_argument("--dim", type=int, default=16)
    parser.add_argument("--epochs", type=int, default=200)
    parser.add_argument("--neighbors", type=int, default=15)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    compiled = get_layout_backend()
    if compiled is _sgd_py:
        print("compiled backend unavailable; timing pure Python only")

    a, b = fit_curve_params(0.1, 1.0)
    init, heads, tails, eps = build_problem(args.n, args.dim, args.neighbors,
                                            args.epochs, args.seed)
    print(f"n={args.n} dim={args.dim} edges={len(heads)} epochs={args.epochs}")

    results = {}
    for name, backend in (("compiled", compiled), ("python", _sgd_py)):
        best, coords = min(
            (run(backend, init, heads, tails, eps, args.epochs, a, b, args.seed)
             for _ in range(args.repeat)),
            key=lambda pair: pair[0],
        )
        results[name] = (best, coords)
        print(f"{name:>9}: {best * 1000:9.1f} ms  (best of {args.repeat})")

    assert np.array_equal(results["compiled"][1], results["python"][1]), (
        "backends disagree: layouts are not bit-identical"
    )
    speedup = results["python"][0] / results["compiled"][0]
    print(f"layouts bit-identical; compiled speedup {speedup:.1f}x")


if __name__ == "__main__":
    main()
