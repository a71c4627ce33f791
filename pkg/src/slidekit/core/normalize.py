"""Per-band normalization: standard (mean/std) and robust (median/IQR)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DimensionError, EmptyDatasetError, UsageError
from .image import MultiBandImage, require_same_shape

MODES = ("standard", "robust")


@dataclass(frozen=True)
class NormalizationStats:
    mode: str
    center: np.ndarray  # per band
    scale: np.ndarray  # per band, strictly positive

    def __post_init__(self):
        if self.mode not in MODES:
            raise UsageError(f"normalization mode must be one of {MODES}, got {self.mode!r}")
        c = np.asarray(self.center, dtype=np.float64)
        s = np.asarray(self.scale, dtype=np.float64)
        if c.ndim != 1 or s.shape != c.shape:
            raise DimensionError("center and scale must be 1-D vectors of equal length")
        if (s <= 0).any():
            raise UsageError("scale entries must be strictly positive")
        c.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "scale", s)

    @property
    def bands(self) -> int:
        return self.center.shape[0]


def fit_normalization(images: Sequence[MultiBandImage], mode: str = "standard") -> NormalizationStats:
    """Fit per-band stats over every pixel of every image.

    standard: mean and population std. robust: median and IQR with
    linear-interpolation quantiles. Zero scale is replaced by 1 so
    constant bands normalize to zero instead of exploding.
    """
    if mode not in MODES:
        raise UsageError(f"normalization mode must be one of {MODES}, got {mode!r}")
    images = list(images)
    if not images:
        raise EmptyDatasetError("cannot fit normalization on an empty image set")
    for img in images[1:]:
        require_same_shape(images[0], img)
    c = images[0].channels
    stacked = np.concatenate([im.data.reshape(-1, c) for im in images], axis=0)

    if mode == "standard":
        center = stacked.mean(axis=0)
        scale = stacked.std(axis=0)  # population (ddof=0)
    else:
        center = np.median(stacked, axis=0)
        q25, q75 = np.quantile(stacked, [0.25, 0.75], axis=0, method="linear")
        scale = q75 - q25
    scale = np.where(scale == 0.0, 1.0, scale)
    return NormalizationStats(mode=mode, center=center, scale=scale)


def apply_normalization(img: MultiBandImage, stats: NormalizationStats) -> MultiBandImage:
    if img.channels != stats.bands:
        raise DimensionError(
            f"image has {img.channels} bands but stats cover {stats.bands}"
        )
    return MultiBandImage.wrap((img.data - stats.center) / stats.scale)


def invert_normalization(img: MultiBandImage, stats: NormalizationStats) -> MultiBandImage:
    if img.channels != stats.bands:
        raise DimensionError(
            f"image has {img.channels} bands but stats cover {stats.bands}"
        )
    return MultiBandImage.wrap(img.data * stats.scale + stats.center)
