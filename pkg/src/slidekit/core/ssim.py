"""Windowed structural similarity for multi-band rasters.

Definition pinned for this project: per band, the image pair is tiled by
8x8 non-overlapping windows (edge windows may be smaller, every pixel
counts once); each window gets the standard SSIM index with K1=0.01,
K2=0.03 and the dynamic range taken as the band's max-min pooled over
both images, floored at 1e-6; window scores average to a band score and
band scores average to the result.

Window statistics come from integral images, so a pair costs a handful
of vectorized passes regardless of window count. First/second moments
use the sum-of-squares form; values with magnitudes wildly larger than
their dynamic range will lose precision there.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .image import MultiBandImage, require_same_shape

WINDOW = 8
K1 = 0.01
K2 = 0.03
MIN_DYNAMIC_RANGE = 1e-6


def _edges(n: int) -> np.ndarray:
    e = np.arange(0, n, WINDOW)
    return np.append(e, n)


def _integral(x: np.ndarray) -> np.ndarray:
    h, w, c = x.shape
    out = np.zeros((h + 1, w + 1, c), dtype=np.float64)
    out[1:, 1:] = x.cumsum(axis=0).cumsum(axis=1)
    return out


def _window_sums(ii: np.ndarray, r0, r1, c0, c1) -> np.ndarray:
    return (
        ii[np.ix_(r1, c1)]
        - ii[np.ix_(r1, c0)]
        - ii[np.ix_(r0, c1)]
        + ii[np.ix_(r0, c0)]
    )


class _Precomp:
    """Per-image quantities reusable across many pairings."""

    __slots__ = ("data", "ii", "ii_sq", "band_min", "band_max")

    def __init__(self, img: MultiBandImage):
        self.data = img.data
        self.ii = _integral(img.data)
        self.ii_sq = _integral(img.data * img.data)
        self.band_min = img.data.min(axis=(0, 1))
        self.band_max = img.data.max(axis=(0, 1))


def _ssim_precomp(a: _Precomp, b: _Precomp) -> float:
    h, w, _ = a.data.shape
    re, ce = _edges(h), _edges(w)
    r0, r1, c0, c1 = re[:-1], re[1:], ce[:-1], ce[1:]
    n = ((r1 - r0)[:, None] * (c1 - c0)[None, :]).astype(np.float64)[:, :, None]

    ii_ab = _integral(a.data * b.data)
    mu_a = _window_sums(a.ii, r0, r1, c0, c1) / n
    mu_b = _window_sums(b.ii, r0, r1, c0, c1) / n
    var_a = _window_sums(a.ii_sq, r0, r1, c0, c1) / n - mu_a * mu_a
    var_b = _window_sums(b.ii_sq, r0, r1, c0, c1) / n - mu_b * mu_b
    cov = _window_sums(ii_ab, r0, r1, c0, c1) / n - mu_a * mu_b

    rng = np.maximum(
        np.maximum(a.band_max, b.band_max) - np.minimum(a.band_min, b.band_min),
        MIN_DYNAMIC_RANGE,
    )
    c1_ = (K1 * rng) ** 2
    c2_ = (K2 * rng) ** 2

    smap = ((2.0 * mu_a * mu_b + c1_) * (2.0 * cov + c2_)) / (
        (mu_a * mu_a + mu_b * mu_b + c1_) * (var_a + var_b + c2_)
    )
    np.clip(smap, -1.0, 1.0, out=smap)
    return float(smap.mean(axis=(0, 1)).mean())


def ssim(a: MultiBandImage, b: MultiBandImage) -> float:
    """Mean windowed SSIM over bands; symmetric, 1.0 for identical images."""
    require_same_shape(a, b)
    return _ssim_precomp(_Precomp(a), _Precomp(b))


def ssim_matrix(images: Sequence[MultiBandImage]) -> np.ndarray:
    """All-pairs SSIM, sharing per-image precomputation; diagonal is 1."""
    for img in images[1:]:
        require_same_shape(images[0], img)
    pre = [_Precomp(img) for img in images]
    n = len(images)
    out = np.ones((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            s = _ssim_precomp(pre[i], pre[j])
            out[i, j] = s
            out[j, i] = s
    return out
