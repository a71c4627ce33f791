"""The .svm model container.

Layout: 4-byte magic "SVM1", uint32 little-endian header length, UTF-8
JSON header (gamma, C, bias, counts, optional embedding standardization),
then the support-vector matrix and the dual coefficients as float32
little-endian payloads.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import DataError
from .smo import SvmModel

MAGIC = b"SVM1"
_LEN = struct.Struct("<I")


def save_svm(model: SvmModel, path) -> None:
    header = {
        "gamma": model.gamma,
        "c": model.c,
        "bias": model.bias,
        "n_support": int(model.support_vectors.shape[0]),
        "dim": int(model.support_vectors.shape[1]),
        "normalization": None
        if model.embed_center is None
        else {
            "center": [float(v) for v in model.embed_center],
            "scale": [float(v) for v in model.embed_scale],
        },
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(_LEN.pack(len(blob)))
        f.write(blob)
        f.write(np.ascontiguousarray(model.support_vectors, dtype="<f4").tobytes())
        f.write(np.ascontiguousarray(model.dual_coefs, dtype="<f4").tobytes())


def load_svm(path) -> SvmModel:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if len(raw) < 8 or raw[:4] != MAGIC:
        raise DataError(f"{path}: not an SVM model file (bad magic)")
    (hlen,) = _LEN.unpack_from(raw, 4)
    if len(raw) < 8 + hlen:
        raise DataError(f"{path}: truncated header")
    try:
        header = json.loads(raw[8 : 8 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: malformed header: {exc}") from exc

    m, d = int(header["n_support"]), int(header["dim"])
    expected = 8 + hlen + (m * d + m) * 4
    if len(raw) != expected:
        raise DataError(f"{path}: payload size mismatch, expected {expected} bytes, got {len(raw)}")
    off = 8 + hlen
    sv = np.frombuffer(raw, dtype="<f4", count=m * d, offset=off).reshape(m, d).astype(np.float64)
    off += m * d * 4
    coefs = np.frombuffer(raw, dtype="<f4", count=m, offset=off).astype(np.float64)

    norm = header["normalization"]
    return SvmModel(
        support_vectors=sv,
        dual_coefs=coefs,
        bias=float(header["bias"]),
        gamma=float(header["gamma"]),
        c=float(header["c"]),
        embed_center=None if norm is None else np.array(norm["center"], dtype=np.float64),
        embed_scale=None if norm is None else np.array(norm["scale"], dtype=np.float64),
    )
