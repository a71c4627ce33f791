"""The .mbt raster container.

Layout: 4-byte magic "MBT1", three uint32 little-endian fields H, W, C,
then H*W*C float32 little-endian values, channel-last row-major. Readers
reject wrong magic and any payload whose size disagrees with the header.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import DataError
from .image import MultiBandImage

MAGIC = b"MBT1"
_HEADER = struct.Struct("<III")


def write_mbt(img: MultiBandImage, path) -> None:
    h, w, c = img.shape
    payload = np.ascontiguousarray(img.data, dtype="<f4").tobytes()
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(_HEADER.pack(h, w, c))
        f.write(payload)


def read_mbt(path) -> MultiBandImage:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if len(raw) < 4 + _HEADER.size:
        raise DataError(f"{path}: truncated header")
    if raw[:4] != MAGIC:
        raise DataError(f"{path}: bad magic {raw[:4]!r}, expected {MAGIC!r}")
    h, w, c = _HEADER.unpack_from(raw, 4)
    if h < 1 or w < 1 or c < 1:
        raise DataError(f"{path}: non-positive dimensions {h}x{w}x{c}")
    expected = 4 + _HEADER.size + h * w * c * 4
    if len(raw) != expected:
        raise DataError(
            f"{path}: payload size mismatch, expected {expected} bytes, got {len(raw)}"
        )
    data = np.frombuffer(raw, dtype="<f4", offset=4 + _HEADER.size).reshape(h, w, c)
    return MultiBandImage.wrap(data.astype(np.float64))
