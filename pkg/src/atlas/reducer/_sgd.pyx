# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled stochastic-gradient layout kernel.

Arithmetic mirrors _sgd_py.py operation for operation so both backends
produce bit-identical layouts.
"""

from libc.math cimport pow
from libc.stdint cimport uint64_t, int32_t

import numpy as np

cdef double CLIP = 4.0
cdef double REPULSION = 1.0
cdef uint64_t XS_MULT = 0x2545F4914F6CDD1DULL
cdef uint64_t SEED_MIX = 0x9E3779B97F4A7C15ULL


cdef inline double _clip(double v) nogil:
    if v > CLIP:
        return CLIP
    if v < -CLIP:
        return -CLIP
    return v


def optimize_layout(
    double[:, ::1] embedding,
    int32_t[::1] heads,
    int32_t[::1] tails,
    double[::1] epochs_per_sample,
    int n_epochs,
    double a,
    double b,
    double negative_sample_rate,
    unsigned long long seed,
    double initial_alpha=1.0,
):
    cdef Py_ssize_t n_vertices = embedding.shape[0]
    cdef Py_ssize_t n_edges = heads.shape[0]
    cdef double[::1] eps = np.asarray(epochs_per_sample, dtype=np.float64).copy()
    cdef double[::1] epns = np.asarray(epochs_per_sample, dtype=np.float64) / negative_sample_rate
    cdef double[::1] next_sample = np.asarray(eps).copy()
    cdef double[::1] next_negative = np.asarray(epns).copy()

    cdef uint64_t state = (<uint64_t> seed) ^ SEED_MIX
    if state == 0:
        state = SEED_MIX

    cdef double bm1 = b - 1.0
    cdef double alpha, dx, dy, dsq, coeff, gx, gy
    cdef Py_ssize_t epoch, i, j, k, k2, p
    cdef long n_neg

    for epoch in range(n_epochs):
        alpha = initial_alpha * (1.0 - (<double> epoch) / (<double> n_epochs))
        for i in range(n_edges):
            if next_sample[i] > epoch:
                continue
            j = heads[i]
            k = tails[i]
            dx = embedding[j, 0] - embedding[k, 0]
            dy = embedding[j, 1] - embedding[k, 1]
            dsq = dx * dx + dy * dy
            if dsq > 0.0:
                coeff = (-2.0 * a * b * pow(dsq, bm1)) / (a * pow(dsq, b) + 1.0)
            else:
                coeff = 0.0
            gx = _clip(coeff * dx)
            gy = _clip(coeff * dy)
            embedding[j, 0] += gx * alpha
            embedding[j, 1] += gy * alpha
            embedding[k, 0] -= gx * alpha
            embedding[k, 1] -= gy * alpha
            next_sample[i] += eps[i]

            n_neg = <long> (((<double> epoch) - next_negative[i]) / epns[i])
            for p in range(n_neg):
                state ^= state >> 12
                state ^= state << 25
                state ^= state >> 27
                k2 = <Py_ssize_t> ((state * XS_MULT) % (<uint64_t> n_vertices))
                dx = embedding[j, 0] - embedding[k2, 0]
                dy = embedding[j, 1] - embedding[k2, 1]
                dsq = dx * dx + dy * dy
                if dsq > 0.0:
                    coeff = (2.0 * REPULSION * b) / ((0.001 + dsq) * (a * pow(dsq, b) + 1.0))
                elif j == k2:
                    continue
                else:
                    coeff = 0.0
                if coeff > 0.0:
                    gx = _clip(coeff * dx)
                    gy = _clip(coeff * dy)
                else:
                    gx = CLIP
                    gy = CLIP
                embedding[j, 0] += gx * alpha
                embedding[j, 1] += gy * alpha
            next_negative[i] += n_neg * epns[i]
