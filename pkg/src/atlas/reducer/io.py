"""Portable binary format for fitted reducer models.

Layout (little-endian): magic ``LLRM``, u32 version, u32 n, u32 d, the
hyperparameters in declaration order (ints as u32/u64, reals as f64, metric
as a u32 code), n*d f32 training vectors row-major, n*2 f32 coordinates,
then f64 curve_a and curve_b.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import BadMagic, IoFailure, UnsupportedVersion
from .engine import ReducerModel, ReducerParams

MAGIC = b"LLRM"
FORMAT_VERSION = 1

_METRIC_CODES = {"cosine": 0, "euclidean": 1}
_METRIC_NAMES = {v: k for k, v in _METRIC_CODES.items()}

_HEADER = struct.Struct("<4sIII")
_PARAMS = struct.Struct("<IddIIIQ")
_CURVE = struct.Struct("<dd")


def save_model(model: ReducerModel, path: str) -> None:
    p = model.params
    try:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, model.n, model.dim))
            fh.write(_PARAMS.pack(
                p.n_neighbors,
                p.min_dist,
                p.spread,
                p.n_epochs,
                p.negative_sample_rate,
                _METRIC_CODES[p.metric],
                p.seed & 0xFFFFFFFFFFFFFFFF,
            ))
            fh.write(np.ascontiguousarray(model.training_vectors, dtype="<f4").tobytes())
            fh.write(np.ascontiguousarray(model.coords, dtype="<f4").tobytes())
            fh.write(_CURVE.pack(model.curve_a, model.curve_b))
    except OSError as exc:
        raise IoFailure(f"cannot write model to {path}: {exc}")


def load_model(path: str) -> ReducerModel:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read model from {path}: {exc}")

    if len(blob) < _HEADER.size or blob[:4] != MAGIC:
        raise BadMagic(f"{path} is not a reducer model file")
    magic, version, n, d = _HEADER.unpack_from(blob, 0)
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(f"model format version {version} not supported")

    offset = _HEADER.size
    (n_neighbors, min_dist, spread, n_epochs,
     neg_rate, metric_code, seed) = _PARAMS.unpack_from(blob, offset)
    offset += _PARAMS.size
    if metric_code not in _METRIC_NAMES:
        raise UnsupportedVersion(f"unknown metric code {metric_code}")

    expected = offset + 4 * n * d + 4 * n * 2 + _CURVE.size
    if len(blob) != expected:
        raise IoFailure(f"model file truncated: {len(blob)} bytes, expected {expected}")

    train = np.frombuffer(blob, dtype="<f4", count=n * d, offset=offset).reshape(n, d)
    offset += 4 * n * d
    coords = np.frombuffer(blob, dtype="<f4", count=n * 2, offset=offset).reshape(n, 2)
    offset += 4 * n * 2
    curve_a, curve_b = _CURVE.unpack_from(blob, offset)

    params = ReducerParams(
        n_neighbors=n_neighbors,
        min_dist=min_dist,
        spread=spread,
        n_epochs=n_epochs,
        negative_sample_rate=neg_rate,
        metric=_METRIC_NAMES[metric_code],
        seed=seed,
    )
    return ReducerModel(
        params=params,
        training_vectors=train.copy(),
        coords=coords.copy(),
        curve_a=curve_a,
        curve_b=curve_b,
        version=version,
    )
