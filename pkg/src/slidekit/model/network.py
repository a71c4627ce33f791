"""Compact trainable CNN: conv/ReLU/maxpool stages, GAP, embedding, linear head.

Implemented directly on numpy. Convolutions run as one GEMM per kernel
tap over the full padded tensor with shifted accumulation, which avoids
materializing im2col matrices; max pooling works on strided window views
with first-match gradient routing. Parameters live in a flat named dict;
convolution weights are stored (kernel, kernel, in, out).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..core.rng import RngState
from ..errors import DimensionError, UsageError


@dataclass(frozen=True)
class CompactCnnConfig:
    in_channels: int
    conv_channels: tuple[int, ...] = (16, 32)
    kernel: int = 3
    embed_dim: int = 64
    n_classes: int = 2

    def __post_init__(self):
        if self.in_channels < 1 or self.embed_dim < 1 or self.n_classes < 2:
            raise UsageError("in_channels, embed_dim must be positive; n_classes >= 2")
        if not self.conv_channels or any(c < 1 for c in self.conv_channels):
            raise UsageError("conv_channels must be a non-empty tuple of positive ints")
        if self.kernel < 1 or self.kernel % 2 == 0:
            raise UsageError(f"kernel must be odd and positive, got {self.kernel}")
        object.__setattr__(self, "conv_channels", tuple(int(c) for c in self.conv_channels))


def param_order(cfg: CompactCnnConfig) -> list[str]:
    names = []
    for s in range(len(cfg.conv_channels)):
        names += [f"conv{s + 1}_w", f"conv{s + 1}_b"]
    names += ["embed_w", "embed_b", "head_w", "head_b"]
    return names


@dataclass
class CompactCnn:
    config: CompactCnnConfig
    params: dict[str, np.ndarray]

    @property
    def dtype(self):
        return self.params["head_w"].dtype

    @property
    def embed_dim(self) -> int:
        return self.config.embed_dim

    def clone(self) -> "CompactCnn":
        return CompactCnn(self.config, {k: v.copy() for k, v in self.params.items()})

    def astype(self, dtype) -> "CompactCnn":
        return CompactCnn(self.config, {k: v.astype(dtype) for k, v in self.params.items()})


def init_compact_cnn(
    cfg: CompactCnnConfig, rng: RngState, dtype=np.float32
) -> CompactCnn:
    """He-uniform weights drawn in a pinned order; zero biases."""
    params: dict[str, np.ndarray] = {}
    k = cfg.kernel
    cin = cfg.in_channels
    for s, cout in enumerate(cfg.conv_channels):
        limit = np.sqrt(6.0 / (k * k * cin))
        params[f"conv{s + 1}_w"] = rng.uniform(-limit, limit, size=(k, k, cin, cout)).astype(dtype)
        params[f"conv{s + 1}_b"] = np.zeros(cout, dtype=dtype)
        cin = cout
    limit = np.sqrt(6.0 / cin)
    params["embed_w"] = rng.uniform(-limit, limit, size=(cin, cfg.embed_dim)).astype(dtype)
    params["embed_b"] = np.zeros(cfg.embed_dim, dtype=dtype)
    limit = np.sqrt(6.0 / cfg.embed_dim)
    params["head_w"] = rng.uniform(-limit, limit, size=(cfg.embed_dim, cfg.n_classes)).astype(dtype)
    params["head_b"] = np.zeros(cfg.n_classes, dtype=dtype)
    return CompactCnn(cfg, params)


class ForwardResult(NamedTuple):
    embeddings: np.ndarray  # (N, embed_dim)
    logits: np.ndarray  # (N, n_classes)
    cache: dict


def _conv_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray):
    """Same-padded stride-1 correlation; returns output and the padded input."""
    n, h, wd, cin = x.shape
    k, _, _, cout = w.shape
    p = k // 2
    xp = np.pad(x, ((0, 0), (p, p), (p, p), (0, 0)))
    hp, wp = h + 2 * p, wd + 2 * p
    flat = xp.reshape(-1, cin)
    buf = np.empty((n * hp * wp, cout), dtype=x.dtype)
    z: np.ndarray | None = None
    for ki in range(k):
        for kj in range(k):
            np.matmul(flat, w[ki, kj], out=buf)
            block = buf.reshape(n, hp, wp, cout)[:, ki : ki + h, kj : kj + wd, :]
            if z is None:
                z = block.copy()
            else:
                z += block
    z += b
    return z, xp


def _conv_backward(dz: np.ndarray, xp: np.ndarray, w: np.ndarray, need_dx: bool):
    n, h, wd, cout = dz.shape
    k, _, cin, _ = w.shape
    p = k // 2
    dz2d = np.ascontiguousarray(dz).reshape(-1, cout)
    dw = np.empty_like(w)
    for ki in range(k):
        for kj in range(k):
            x_tap = xp[:, ki : ki + h, kj : kj + wd, :].reshape(-1, cin)
            dw[ki, kj] = x_tap.T @ dz2d
    db = dz2d.sum(axis=0)
    if not need_dx:
        return None, dw, db

    # input gradient: correlate padded dz with the flipped, transposed kernel
    dzp = np.pad(dz, ((0, 0), (p, p), (p, p), (0, 0)))
    hp, wp = h + 2 * p, wd + 2 * p
    flat = dzp.reshape(-1, cout)
    buf = np.empty((n * hp * wp, cin), dtype=dz.dtype)
    dx: np.ndarray | None = None
    for ki in range(k):
        for kj in range(k):
            np.matmul(flat, w[k - 1 - ki, k - 1 - kj].T, out=buf)
            block = buf.reshape(n, hp, wp, cin)[:, ki : ki + h, kj : kj + wd, :]
            if dx is None:
                dx = block.copy()
            else:
                dx += block
    return dx, dw, db


def _pool_forward(a: np.ndarray):
    """2x2 max pooling, stride 2; odd trailing row/col dropped, size-1 axes kept."""
    n, h, w, c = a.shape
    hh = 2 if h >= 2 else 1
    ww = 2 if w >= 2 else 1
    h2, w2 = max(1, h // 2), max(1, w // 2)
    out: np.ndarray | None = None
    for i in range(hh):
        for j in range(ww):
            view = a[:, i : h2 * hh : hh, j : w2 * ww : ww, :]
            out = view.copy() if out is None else np.maximum(out, view, out=out)
    return out, (hh, ww)


def _pool_backward(dout: np.ndarray, a: np.ndarray, out: np.ndarray, hh: int, ww: int):
    """Route each window's gradient to its first maximal element (row-major)."""
    h2, w2 = out.shape[1], out.shape[2]
    da = np.zeros_like(a)
    taken = np.zeros(out.shape, dtype=bool)
    for i in range(hh):
        for j in range(ww):
            view = a[:, i : h2 * hh : hh, j : w2 * ww : ww, :]
            mask = (view == out) & ~taken
            da[:, i : h2 * hh : hh, j : w2 * ww : ww, :] = dout * mask
            taken |= mask
    return da


def forward(net: CompactCnn, images: np.ndarray) -> ForwardResult:
    """Run the network on an (N, H, W, C) batch; returns embeddings, logits, cache."""
    x = np.ascontiguousarray(images, dtype=net.dtype)
    if x.ndim != 4:
        raise DimensionError(f"batch must be (N, H, W, C), got shape {x.shape}")
    if x.shape[3] != net.config.in_channels:
        raise DimensionError(
            f"batch has {x.shape[3]} bands but network expects {net.config.in_channels}"
        )
    cache: dict = {"stages": []}
    cur = x
    for s in range(len(net.config.conv_channels)):
        z, xp = _conv_forward(cur, net.params[f"conv{s + 1}_w"], net.params[f"conv{s + 1}_b"])
        a = np.maximum(z, 0, out=z)  # in-place; a > 0 doubles as the relu mask
        pooled, (hh, ww) = _pool_forward(a)
        cache["stages"].append({"xp": xp, "a": a, "out": pooled, "hh": hh, "ww": ww})
        cur = pooled
    n, hp, wp, c = cur.shape
    g = cur.mean(axis=(1, 2))
    e_pre = g @ net.params["embed_w"] + net.params["embed_b"]
    e = np.maximum(e_pre, 0)
    logits = e @ net.params["head_w"] + net.params["head_b"]
    cache.update({"pooled_shape": cur.shape, "g": g, "e_pre": e_pre, "e": e})
    return ForwardResult(e, logits, cache)


def backward(net: CompactCnn, cache: dict, dlogits: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of a scalar loss w.r.t. every parameter, given dLoss/dLogits."""
    dlogits = np.asarray(dlogits, dtype=net.dtype)
    e, e_pre, g = cache["e"], cache["e_pre"], cache["g"]
    grads: dict[str, np.ndarray] = {}
    grads["head_w"] = e.T @ dlogits
    grads["head_b"] = dlogits.sum(axis=0)
    de = dlogits @ net.params["head_w"].T
    de_pre = de * (e_pre > 0)
    grads["embed_w"] = g.T @ de_pre
    grads["embed_b"] = de_pre.sum(axis=0)
    dg = de_pre @ net.params["embed_w"].T

    n, hp, wp, c = cache["pooled_shape"]
    dcur = np.broadcast_to(dg[:, None, None, :] / (hp * wp), (n, hp, wp, c))
    for s in reversed(range(len(net.config.conv_channels))):
        st = cache["stages"][s]
        da = _pool_backward(dcur, st["a"], st["out"], st["hh"], st["ww"])
        dz = da
        dz *= st["a"] > 0  # relu mask; da is fresh so in-place is safe
        dcur, dw, db = _conv_backward(dz, st["xp"], net.params[f"conv{s + 1}_w"], need_dx=s > 0)
        grads[f"conv{s + 1}_w"] = dw
        grads[f"conv{s + 1}_b"] = db
    return grads


def softmax(logits: np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=1, keepdims=True)
    ez = np.exp(z)
    return ez / ez.sum(axis=1, keepdims=True)
