"""Pairwise sample mixing: cutmix (rectangle splice) and mixup (global blend)."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..core.image import MultiBandImage, SoftLabel, require_same_shape
from ..core.rng import RngState
from ..errors import UsageError


class MixResult(NamedTuple):
    image: MultiBandImage
    label: SoftLabel
    lam: float
    # (x1, y1, x2, y2) for cutmix, None for mixup; x indexes columns, y rows
    rect: tuple[int, int, int, int] | None


def _two_distinct(rng: RngState, upper: int) -> tuple[int, int]:
    """Two distinct uniform integers from {0..upper}, returned ordered."""
    a = int(rng.integers(0, upper + 1))
    b = int(rng.integers(0, upper + 1))
    while b == a:
        b = int(rng.integers(0, upper + 1))
    return (a, b) if a < b else (b, a)


def cutmix(
    a: tuple[MultiBandImage, SoftLabel],
    b: tuple[MultiBandImage, SoftLabel],
    rng: RngState,
) -> MixResult:
    """Replace a random rectangle of `a` with `b`'s pixels across all bands.

    The mixing ratio is the surviving area fraction,
    lam = 1 - rect_area / (W*H), and the label mixes by the same ratio.
    """
    img_a, lab_a = a
    img_b, lab_b = b
    require_same_shape(img_a, img_b)
    h, w = img_a.height, img_a.width
    x1, x2 = _two_distinct(rng, w)
    y1, y2 = _two_distinct(rng, h)

    out = np.array(img_a.data, copy=True)
    out[y1:y2, x1:x2, :] = img_b.data[y1:y2, x1:x2, :]
    lam = 1.0 - ((x2 - x1) * (y2 - y1)) / (w * h)
    label = SoftLabel(lam * lab_a.p + (1.0 - lam) * lab_b.p)
    return MixResult(MultiBandImage.wrap(out), label, lam, (x1, y1, x2, y2))


def mixup(
    a: tuple[MultiBandImage, SoftLabel],
    b: tuple[MultiBandImage, SoftLabel],
    rng: RngState,
    lam: float | None = None,
) -> MixResult:
    """Blend whole images and labels with one weight.

    lam defaults to a uniform [0, 1] draw; pass it explicitly to use a
    different mixing distribution.
    """
    img_a, lab_a = a
    img_b, lab_b = b
    require_same_shape(img_a, img_b)
    if lam is None:
        lam = float(rng.uniform())
    if not 0.0 <= lam <= 1.0:
        raise UsageError(f"mixing coefficient must lie in [0, 1], got {lam}")
    if lam == 1.0:
        return MixResult(img_a, lab_a, 1.0, None)
    if lam == 0.0:
        return MixResult(img_b, lab_b, 0.0, None)

    out = img_b.data + lam * (img_a.data - img_b.data)
    # endpoint rounding can escape the parent interval by one ulp; pin it back
    np.clip(out, np.minimum(img_a.data, img_b.data), np.maximum(img_a.data, img_b.data), out=out)
    label = SoftLabel(lam * lab_a.p + (1.0 - lam) * lab_b.p)
    return MixResult(MultiBandImage.wrap(out), label, lam, None)
