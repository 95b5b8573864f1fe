"""Pure-Python stochastic-gradient layout kernel.

Fallback used when the compiled extension is unavailable.  The arithmetic
mirrors ``_sgd.pyx`` operation for operation (same libm calls, same RNG,
same update order), so both backends produce bit-identical layouts; the
benchmark in benchmarks/bench_layout.py asserts this.
"""

from __future__ import annotations

from math import pow as fpow

import numpy as np

_U64 = (1 << 64) - 1
_XS_MULT = 0x2545F4914F6CDD1D
_SEED_MIX = 0x9E3779B97F4A7C15

CLIP = 4.0
REPULSION = 1.0


def _clip(v: float) -> float:
    if v > CLIP:
        return CLIP
    if v < -CLIP:
        return -CLIP
    return v


def optimize_layout(
    embedding: np.ndarray,
    heads: np.ndarray,
    tails: np.ndarray,
    epochs_per_sample: np.ndarray,
    n_epochs: int,
    a: float,
    b: float,
    negative_sample_rate: float,
    seed: int,
    initial_alpha: float = 1.0,
) -> None:
    n_vertices = embedding.shape[0]
    n_edges = heads.shape[0]
    pos = [[float(embedding[i, 0]), float(embedding[i, 1])] for i in range(n_vertices)]
    heads_l = [int(h) for h in heads]
    tails_l = [int(t) for t in tails]
    eps = [float(e) for e in epochs_per_sample]
    epns = [e / negative_sample_rate for e in eps]
    next_sample = list(eps)
    next_negative = list(epns)

    state = (seed ^ _SEED_MIX) & _U64 or _SEED_MIX
    bm1 = b - 1.0

    for epoch in range(n_epochs):
        alpha = initial_alpha * (1.0 - epoch / n_epochs)
        for i in range(n_edges):
            if next_sample[i] > epoch:
                continue
            j = heads_l[i]
            k = tails_l[i]
            cur = pos[j]
            oth = pos[k]
            dx = cur[0] - oth[0]
            dy = cur[1] - oth[1]
            dsq = dx * dx + dy * dy
            if dsq > 0.0:
                coeff = (-2.0 * a * b * fpow(dsq, bm1)) / (a * fpow(dsq, b) + 1.0)
            else:
                coeff = 0.0
            gx = _clip(coeff * dx)
            gy = _clip(coeff * dy)
            cur[0] += gx * alpha
            cur[1] += gy * alpha
            oth[0] -= gx * alpha
            oth[1] -= gy * alpha
            next_sample[i] += eps[i]

            n_neg = int((epoch - next_negative[i]) / epns[i])
            for _ in range(n_neg):
                # xorshift64* negative sampling
                state ^= state >> 12
                state = (state ^ (state << 25)) & _U64
                state ^= state >> 27
                k2 = ((state * _XS_MULT) & _U64) % n_vertices
                oth = pos[k2]
                dx = cur[0] - oth[0]
                dy = cur[1] - oth[1]
                dsq = dx * dx + dy * dy
                if dsq > 0.0:
                    coeff = (2.0 * REPULSION * b) / ((0.001 + dsq) * (a * fpow(dsq, b) + 1.0))
                elif j == k2:
                    continue
                else:
                    coeff = 0.0
                gx = _clip(coeff * dx) if coeff > 0.0 else CLIP
                gy = _clip(coeff * dy) if coeff > 0.0 else CLIP
                cur[0] += gx * alpha
                cur[1] += gy * alpha
            next_negative[i] += n_neg * epns[i]

    for i in range(n_vertices):
        embedding[i, 0] = pos[i][0]
        embedding[i, 1] = pos[i][1]
