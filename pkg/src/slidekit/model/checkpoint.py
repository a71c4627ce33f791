"""The .cnn checkpoint container.

Layout: 4-byte magic "CNN1", uint32 little-endian header length, UTF-8
JSON header (network config, tensor names/shapes, optional per-band
normalization stats, free-form metadata), then each tensor's float32
little-endian payload concatenated in header order.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..core.normalize import NormalizationStats
from ..errors import DataError
from .network import CompactCnn, CompactCnnConfig, param_order

MAGIC = b"CNN1"
_LEN = struct.Struct("<I")


def _stats_to_json(stats: NormalizationStats | None):
    if stats is None:
        return None
    return {
        "mode": stats.mode,
        "center": [float(v) for v in stats.center],
        "scale": [float(v) for v in stats.scale],
    }


def _stats_from_json(obj) -> NormalizationStats | None:
    if obj is None:
        return None
    return NormalizationStats(
        mode=obj["mode"],
        center=np.array(obj["center"], dtype=np.float64),
        scale=np.array(obj["scale"], dtype=np.float64),
    )


def save_checkpoint(
    net: CompactCnn,
    path,
    stats: NormalizationStats | None = None,
    meta: dict | None = None,
) -> None:
    names = param_order(net.config)
    header = {
        "config": {
            "in_channels": net.config.in_channels,
            "conv_channels": list(net.config.conv_channels),
            "kernel": net.config.kernel,
            "embed_dim": net.config.embed_dim,
            "n_classes": net.config.n_classes,
        },
        "tensors": [{"name": n, "shape": list(net.params[n].shape)} for n in names],
        "normalization": _stats_to_json(stats),
        "meta": meta or {},
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(_LEN.pack(len(blob)))
        f.write(blob)
        for n in names:
            f.write(np.ascontiguousarray(net.params[n], dtype="<f4").tobytes())


def load_checkpoint(path) -> tuple[CompactCnn, NormalizationStats | None, dict]:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if len(raw) < 8 or raw[:4] != MAGIC:
        raise DataError(f"{path}: not a checkpoint file (bad magic)")
    (hlen,) = _LEN.unpack_from(raw, 4)
    if len(raw) < 8 + hlen:
        raise DataError(f"{path}: truncated header")
    try:
        header = json.loads(raw[8 : 8 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: malformed header: {exc}") from exc

    cfg = CompactCnnConfig(
        in_channels=header["config"]["in_channels"],
        conv_channels=tuple(header["config"]["conv_channels"]),
        kernel=header["config"]["kernel"],
        embed_dim=header["config"]["embed_dim"],
        n_classes=header["config"]["n_classes"],
    )
    params: dict[str, np.ndarray] = {}
    offset = 8 + hlen
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        end = offset + count * 4
        if end > len(raw):
            raise DataError(f"{path}: truncated payload for tensor {entry['name']!r}")
        params[entry["name"]] = (
            np.frombuffer(raw, dtype="<f4", count=count, offset=offset).reshape(shape).copy()
        )
        offset = end
    if offset != len(raw):
        raise DataError(f"{path}: {len(raw) - offset} trailing bytes after tensors")
    if set(params) != set(param_order(cfg)):
        raise DataError(f"{path}: tensor names do not match the declared config")
    return CompactCnn(cfg, params), _stats_from_json(header["normalization"]), header["meta"]
