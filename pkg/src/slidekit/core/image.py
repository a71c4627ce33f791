"""Sample types: multi-band raster images and two-class soft labels."""
from __future__ import annotations

import numpy as np

from ..errors import DimensionError, UsageError

# class index convention everywhere: 0 = non-landslide, 1 = landslide
NON_LANDSLIDE = 0
LANDSLIDE = 1


class MultiBandImage:
    """An H x W x C raster, channel-last, float64 in memory, immutable.

    The constructor copies and validates; `wrap` adopts an array produced
    by an operation that already guarantees the invariants.
    """

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, copy=True)
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise DimensionError(
                f"image data must be (H, W, C) with positive dims, got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise UsageError("image data contains NaN or Inf")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def wrap(cls, arr: np.ndarray) -> "MultiBandImage":
        """Adopt a freshly computed float64 (H, W, C) array without re-copying."""
        if not np.isfinite(arr).all():
            raise UsageError("image data contains NaN or Inf")
        obj = object.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(obj, "data", arr)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("MultiBandImage is immutable")

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape

    def same_shape(self, other: "MultiBandImage") -> bool:
        return self.shape == other.shape


def require_same_shape(a: MultiBandImage, b: MultiBandImage, what: str = "images"):
    if a.shape != b.shape:
        raise DimensionError(f"{what} must share one shape, got {a.shape} vs {b.shape}")


def select_bands(img: MultiBandImage, bands) -> MultiBandImage:
    """Keep the listed band indices, in the listed order."""
    idx = list(bands)
    for b in idx:
        if not 0 <= b < img.channels:
            raise DimensionError(f"band index {b} outside image with {img.channels} bands")
    return MultiBandImage.wrap(img.data[:, :, idx])


class SoftLabel:
    """Probability vector over (non-landslide, landslide)."""

    __slots__ = ("p",)

    _TOL = 1e-9

    def __init__(self, p):
        arr = np.array(p, dtype=np.float64, copy=True)
        if arr.shape != (2,):
            raise UsageError(f"soft label must have 2 components, got shape {arr.shape}")
        if (arr < -self._TOL).any() or (arr > 1 + self._TOL).any():
            raise UsageError(f"soft label components must lie in [0, 1], got {arr}")
        if abs(float(arr.sum()) - 1.0) > self._TOL:
            raise UsageError(f"soft label must sum to 1 within {self._TOL}, got {arr}")
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SoftLabel is immutable")

    @classmethod
    def from_hard(cls, label: int) -> "SoftLabel":
        if label not in (0, 1):
            raise UsageError(f"hard label must be 0 or 1, got {label}")
        return cls((1.0 - label, float(label)))

    @property
    def landslide(self) -> float:
        return float(self.p[LANDSLIDE])

    def hard(self) -> int:
        """Dominant class; ties resolve to landslide."""
        return LANDSLIDE if self.p[LANDSLIDE] >= self.p[NON_LANDSLIDE] else NON_LANDSLIDE

    def __repr__(self) -> str:
        return f"SoftLabel(({self.p[0]:.6g}, {self.p[1]:.6g}))"


def validate_soft_rows(targets: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Check an (N, 2) array of soft-label rows; returns it as float64."""
    t = np.asarray(targets, dtype=np.float64)
    if t.ndim != 2 or t.shape[1] != 2:
        raise UsageError(f"targets must be (N, 2), got shape {t.shape}")
    if (t < -tol).any() or (t > 1 + tol).any():
        raise UsageError("target rows must lie in [0, 1]")
    if np.abs(t.sum(axis=1) - 1.0).max(initial=0.0) > tol:
        raise UsageError("target rows must each sum to 1")
    return t
