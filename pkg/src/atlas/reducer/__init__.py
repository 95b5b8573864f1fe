"""2D layout engine: kNN graph, fuzzy neighborhood graph, SGD layout.

The per-edge gradient loop is the hot path; a compiled Cython kernel is
used when available, with a bit-identical pure-Python fallback.  Set
``ATLAS_LAYOUT=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _sgd_py

try:
    from . import _sgd as _compiled
except ImportError:
    _compiled = None

LAYOUT_BACKEND = "compiled" if _compiled is not None else "python"
if os.environ.get("ATLAS_LAYOUT") == "python":
    LAYOUT_BACKEND = "python"


def get_layout_backend():
    if LAYOUT_BACKEND == "compiled":
        return _compiled
    return _sgd_py


from .knn import knn_graph, pairwise_distances, distances_to  # noqa: E402
from .fuzzy import FuzzyGraph, fuzzy_simplicial_set, smooth_knn_sigma  # noqa: E402
from .curve import fit_curve_params, similarity  # noqa: E402
from .engine import (  # noqa: E402
    ReducerModel,
    ReducerParams,
    attractive_gradient,
    attractive_log_likelihood,
    fit,
    make_epochs_per_sample,
    transform,
)
from .io import FORMAT_VERSION, load_model, save_model  # noqa: E402

__all__ = [
    "FORMAT_VERSION",
    "FuzzyGraph",
    "LAYOUT_BACKEND",
    "ReducerModel",
    "ReducerParams",
    "attractive_gradient",
    "attractive_log_likelihood",
    "distances_to",
    "fit",
    "fit_curve_params",
    "fuzzy_simplicial_set",
    "get_layout_backend",
    "knn_graph",
    "load_model",
    "make_epochs_per_sample",
    "pairwise_distances",
    "save_model",
    "similarity",
    "smooth_knn_sigma",
    "transform",
]
