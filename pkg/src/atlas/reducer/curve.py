"""Least-squares fit of the low-dimensional similarity curve.

The layout treats 1 / (1 + a * d^(2b)) as the probability that two points
at map distance d are connected; (a, b) are chosen so this smooth family
matches the min_dist/spread offset-exponential falloff.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import curve_fit

CURVE_SAMPLES = 300


def similarity(d: np.ndarray | float, a: float, b: float):
    return 1.0 / (1.0 + a * np.power(d, 2.0 * b))


def target_falloff(x: np.ndarray, min_dist: float, spread: float) -> np.ndarray:
    y = np.zeros_like(x)
    y[x < min_dist] = 1.0
    tail = x >= min_dist
    y[tail] = np.exp(-(x[tail] - min_dist) / spread)
    return y


def fit_curve_params(min_dist: float, spread: float) -> tuple[float, float]:
    xv = np.linspace(0.0, spread * 3.0, CURVE_SAMPLES)
    yv = target_falloff(xv, min_dist, spread)
    (a, b), _ = curve_fit(similarity, xv, yv)
    return float(a), float(b)
