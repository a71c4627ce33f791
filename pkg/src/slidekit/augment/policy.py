"""Online batch augmentation: color and geometric transforms plus pair mixing.

Per batch, every sample gets an independent child RNG stream (keyed by
its index, so results do not depend on processing order), then a single
batch-level draw selects at most one of cutmix/mixup for the whole batch.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.image import MultiBandImage, SoftLabel, require_same_shape
from ..core.rng import RngState
from ..errors import UsageError
from .mixing import cutmix, mixup

Sample = tuple[MultiBandImage, SoftLabel]


@dataclass(frozen=True)
class AugmentPolicy:
    noise_prob: float = 0.0
    noise_sigma: float = 0.02  # std as a fraction of the per-band value range
    jitter_prob: float = 0.0
    brightness_delta: float = 0.1  # max additive shift, fraction of band range
    contrast_delta: float = 0.1  # max relative contrast change
    saturation_delta: float = 0.1  # max relative saturation change
    rgb_bands: tuple[int, int, int] | None = None  # required for saturation
    hflip_prob: float = 0.0
    vflip_prob: float = 0.0
    rot90_prob: float = 0.0
    shift_prob: float = 0.0
    shift_max: int = 0  # max absolute shift in pixels, each axis
    shear_prob: float = 0.0
    shear_max: float = 0.0  # max absolute horizontal shear factor
    cutmix_prob: float = 0.0
    mixup_prob: float = 0.0

    def __post_init__(self):
        probs = {
            "noise_prob": self.noise_prob,
            "jitter_prob": self.jitter_prob,
            "hflip_prob": self.hflip_prob,
            "vflip_prob": self.vflip_prob,
            "rot90_prob": self.rot90_prob,
            "shift_prob": self.shift_prob,
            "shear_prob": self.shear_prob,
            "cutmix_prob": self.cutmix_prob,
            "mixup_prob": self.mixup_prob,
        }
        for name, p in probs.items():
            if not 0.0 <= p <= 1.0:
                raise UsageError(f"{name} must lie in [0, 1], got {p}")
        # cutmix and mixup are mutually exclusive alternatives of one draw
        if self.cutmix_prob + self.mixup_prob > 1.0 + 1e-12:
            raise UsageError("cutmix_prob + mixup_prob must not exceed 1")
        if self.shift_max < 0 or self.shear_max < 0 or self.noise_sigma < 0:
            raise UsageError("transform magnitudes must be non-negative")
        if self.rgb_bands is not None and len(self.rgb_bands) != 3:
            raise UsageError("rgb_bands must name exactly three bands")

    @property
    def mixes(self) -> bool:
        return self.cutmix_prob > 0.0 or self.mixup_prob > 0.0


# ---------------------------------------------------------------------------
# transform primitives (pure; each returns a new image)


def add_gaussian_noise(img: MultiBandImage, sigma_frac: float, rng: RngState) -> MultiBandImage:
    band_range = img.data.max(axis=(0, 1)) - img.data.min(axis=(0, 1))
    sigma = sigma_frac * band_range
    return MultiBandImage.wrap(img.data + rng.normal(size=img.shape) * sigma)


def adjust_brightness(img: MultiBandImage, delta_frac: float) -> MultiBandImage:
    band_range = img.data.max(axis=(0, 1)) - img.data.min(axis=(0, 1))
    return MultiBandImage.wrap(img.data + delta_frac * band_range)


def adjust_contrast(img: MultiBandImage, factor: float) -> MultiBandImage:
    mean = img.data.mean(axis=(0, 1))
    return MultiBandImage.wrap(mean + (img.data - mean) * factor)


def adjust_saturation(
    img: MultiBandImage, factor: float, rgb_bands: tuple[int, int, int]
) -> MultiBandImage:
    for b in rgb_bands:
        if not 0 <= b < img.channels:
            raise UsageError(f"rgb band index {b} outside {img.channels} bands")
    out = np.array(img.data, copy=True)
    rgb = out[:, :, list(rgb_bands)]
    gray = rgb.mean(axis=2, keepdims=True)
    out[:, :, list(rgb_bands)] = gray + (rgb - gray) * factor
    return MultiBandImage.wrap(out)


def hflip(img: MultiBandImage) -> MultiBandImage:
    return MultiBandImage.wrap(img.data[:, ::-1, :])


def vflip(img: MultiBandImage) -> MultiBandImage:
    return MultiBandImage.wrap(img.data[::-1, :, :])


def rotate90(img: MultiBandImage, k: int) -> MultiBandImage:
    """Rotate by k*90 degrees; non-square images only support k even."""
    k = k % 4
    if k == 0:
        return img
    if img.height != img.width and k % 2 == 1:
        raise UsageError("quarter-turn rotation requires a square image")
    return MultiBandImage.wrap(np.rot90(img.data, k=k, axes=(0, 1)))


def shift2d(img: MultiBandImage, dy: int, dx: int) -> MultiBandImage:
    """Integer translation with zero fill."""
    h, w, _ = img.shape
    out = np.zeros_like(img.data)
    ys = slice(max(0, dy), min(h, h + dy))
    xs = slice(max(0, dx), min(w, w + dx))
    ys_src = slice(max(0, -dy), min(h, h - dy))
    xs_src = slice(max(0, -dx), min(w, w - dx))
    out[ys, xs, :] = img.data[ys_src, xs_src, :]
    return MultiBandImage.wrap(out)


def shear_x(img: MultiBandImage, factor: float) -> MultiBandImage:
    """Horizontal shear about the row center, bilinear with zero fill."""
    h, w, _ = img.shape
    cy = (h - 1) / 2.0
    cols = np.arange(w, dtype=np.float64)[None, :]
    offs = factor * (np.arange(h, dtype=np.float64) - cy)[:, None]
    src = cols - offs  # sample position per output pixel
    base = np.floor(src).astype(np.intp)
    frac = (src - base)[:, :, None]
    rows = np.arange(h, dtype=np.intp)[:, None]

    def gather(ix):
        valid = (ix >= 0) & (ix < w)
        vals = img.data[rows, np.clip(ix, 0, w - 1), :]
        return np.where(valid[:, :, None], vals, 0.0)

    out = (1.0 - frac) * gather(base) + frac * gather(base + 1)
    return MultiBandImage.wrap(out)


# ---------------------------------------------------------------------------


def _augment_one(img: MultiBandImage, policy: AugmentPolicy, r: RngState) -> MultiBandImage:
    if r.uniform() < policy.noise_prob:
        img = add_gaussian_noise(img, policy.noise_sigma, r)
    if r.uniform() < policy.jitter_prob:
        img = adjust_brightness(img, float(r.uniform(-policy.brightness_delta, policy.brightness_delta)))
        img = adjust_contrast(img, 1.0 + float(r.uniform(-policy.contrast_delta, policy.contrast_delta)))
        if policy.rgb_bands is not None:
            img = adjust_saturation(
                img, 1.0 + float(r.uniform(-policy.saturation_delta, policy.saturation_delta)),
                policy.rgb_bands,
            )
    if r.uniform() < policy.hflip_prob:
        img = hflip(img)
    if r.uniform() < policy.vflip_prob:
        img = vflip(img)
    if r.uniform() < policy.rot90_prob:
        k = 2 if img.height != img.width else 1 + int(r.integers(0, 3))
        img = rotate90(img, k)
    if r.uniform() < policy.shift_prob and policy.shift_max > 0:
        dy = int(r.integers(-policy.shift_max, policy.shift_max + 1))
        dx = int(r.integers(-policy.shift_max, policy.shift_max + 1))
        img = shift2d(img, dy, dx)
    if r.uniform() < policy.shear_prob and policy.shear_max > 0:
        img = shear_x(img, float(r.uniform(-policy.shear_max, policy.shear_max)))
    return img


def apply_policy(
    batch: Sequence[Sample], policy: AugmentPolicy, rng: RngState
) -> list[Sample]:
    """Augment a batch; shapes and label validity are preserved."""
    batch = list(batch)
    if not batch:
        raise UsageError("cannot augment an empty batch")
    first = batch[0][0]
    for img, _ in batch[1:]:
        require_same_shape(first, img)

    r_samples = rng.child(0)
    r_batch = rng.child(1)
    out: list[Sample] = [
        (_augment_one(img, policy, r_samples.child(i)), lab)
        for i, (img, lab) in enumerate(batch)
    ]

    u = float(r_batch.uniform())
    mode = None
    if u < policy.cutmix_prob:
        mode = "cutmix"
    elif u < policy.cutmix_prob + policy.mixup_prob:
        mode = "mixup"
    if mode is None or len(out) < 2:
        return out

    sources = list(out)
    perm = r_batch.permutation(len(out))
    mixed: list[Sample] = []
    for i, sample in enumerate(out):
        partner = sources[int(perm[i])]
        if mode == "cutmix":
            res = cutmix(sample, partner, r_batch.child(i))
        else:
            res = mixup(sample, partner, r_batch.child(i))
        mixed.append((res.image, res.label))
    return mixed
