"""Bilinear resampling with half-pixel alignment."""
from __future__ import annotations

import numpy as np

from ..errors import UsageError
from .image import MultiBandImage


def _axis_coords(n_out: int, n_in: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer base index and fractional offset per output position.

    Source position of output i is (i + 0.5) * n_in / n_out - 0.5, clamped
    to the valid range so border pixels extend outward (no zero halo).
    """
    pos = (np.arange(n_out, dtype=np.float64) + 0.5) * (n_in / n_out) - 0.5
    pos = np.clip(pos, 0.0, n_in - 1.0)
    base = np.floor(pos).astype(np.intp)
    base = np.minimum(base, n_in - 2) if n_in > 1 else base
    frac = pos - base
    return base, frac


def resize_bilinear(img: MultiBandImage, out_h: int, out_w: int) -> MultiBandImage:
    """Resize every band; exact identity at the original size, constants preserved."""
    if out_h < 1 or out_w < 1:
        raise UsageError(f"target size must be positive, got {out_h}x{out_w}")
    h, w = img.height, img.width
    if (out_h, out_w) == (h, w):
        return img

    ry, fy = _axis_coords(out_h, h)
    rx, fx = _axis_coords(out_w, w)
    y1 = np.minimum(ry + 1, h - 1)
    x1 = np.minimum(rx + 1, w - 1)

    d = img.data
    # lerp form a + f*(b-a): constants and f=0 reproduce inputs exactly
    fy_ = fy[:, None, None]
    fx_ = fx[None, :, None]
    top = d[ry][:, rx] + fx_ * (d[ry][:, x1] - d[ry][:, rx])
    bot = d[y1][:, rx] + fx_ * (d[y1][:, x1] - d[y1][:, rx])
    out = top + fy_ * (bot - top)
    return MultiBandImage.wrap(out)
