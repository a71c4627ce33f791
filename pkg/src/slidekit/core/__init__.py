"""Image primitives, similarity, normalization, resizing, RNG, and file container."""

from .image import LANDSLIDE, NON_LANDSLIDE, MultiBandImage, SoftLabel, select_bands
from .mbt import read_mbt, write_mbt
from .normalize import (
    NormalizationStats,
    apply_normalization,
    fit_normalization,
    invert_normalization,
)
from .resize import resize_bilinear
from .rng import RngState
from .ssim import ssim, ssim_matrix

__all__ = [
    "LANDSLIDE",
    "NON_LANDSLIDE",
    "MultiBandImage",
    "SoftLabel",
    "NormalizationStats",
    "RngState",
    "apply_normalization",
    "fit_normalization",
    "invert_normalization",
    "read_mbt",
    "resize_bilinear",
    "select_bands",
    "ssim",
    "ssim_matrix",
    "write_mbt",
]
