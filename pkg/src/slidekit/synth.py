"""Synthetic multi-band benchmark dataset.

Two classes, configurable imbalance. Every band is a smooth random field
plus white noise; landslide samples additionally carry a Gaussian blob
in each designated signal band. Roughly half of all samples (either
class) get a distractor blob in one random non-signal band so a model
cannot shortcut on "any blob anywhere". One designated band is all
zeros, giving occlusion analysis a provably dead band.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .core.image import MultiBandImage
from .core.mbt import write_mbt
from .core.resize import resize_bilinear
from .core.rng import RngState
from .errors import UsageError
from .manifest import ManifestRow, write_manifest


def _smooth_field(size: int, rng: RngState, coarse: int = 8, amplitude: float = 1.0) -> np.ndarray:
    grid = rng.normal(size=(coarse, coarse, 1)) * amplitude
    img = MultiBandImage.wrap(np.ascontiguousarray(grid))
    return resize_bilinear(img, size, size).data[:, :, 0]


def _blob(size: int, rng: RngState, amplitude: float) -> np.ndarray:
    cy = float(rng.uniform(0.25 * size, 0.75 * size))
    cx = float(rng.uniform(0.25 * size, 0.75 * size))
    sigma = float(rng.uniform(size / 8.0, size / 5.0))
    yy, xx = np.mgrid[0:size, 0:size]
    d2 = (yy - cy) ** 2 + (xx - cx) ** 2
    return amplitude * np.exp(-d2 / (2.0 * sigma * sigma))


def make_synth(
    out_dir,
    n_samples: int = 400,
    size: int = 64,
    bands: int = 12,
    imbalance: float = 8.0,
    signal_bands: tuple[int, ...] = (2, 5, 9),
    dead_band: int | None = 11,
    seed: int = 0,
    signal_amplitude: float = 5.0,
    noise_sigma: float = 0.3,
) -> Path:
    """Write the dataset and return the manifest path."""
    if n_samples < 2 or size < 8 or bands < 1:
        raise UsageError("need n_samples >= 2, size >= 8, bands >= 1")
    if imbalance < 1.0:
        raise UsageError(f"imbalance must be >= 1, got {imbalance}")
    for b in signal_bands:
        if not 0 <= b < bands:
            raise UsageError(f"signal band {b} outside {bands} bands")
    if dead_band is not None:
        if not 0 <= dead_band < bands:
            raise UsageError(f"dead band {dead_band} outside {bands} bands")
        if dead_band in signal_bands:
            raise UsageError("dead band cannot also be a signal band")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = RngState(seed)

    n_minority = max(1, round(n_samples / (imbalance + 1.0)))
    positions = rng.child(0).permutation(n_samples)
    labels = np.zeros(n_samples, dtype=np.int64)
    labels[positions[:n_minority]] = 1

    distractor_pool = [
        b for b in range(bands) if b not in signal_bands and b != dead_band
    ]

    rows: list[ManifestRow] = []
    for i in range(n_samples):
        r = rng.child(1 + i)
        img = np.empty((size, size, bands), dtype=np.float64)
        for b in range(bands):
            img[:, :, b] = _smooth_field(size, r.child(b)) + noise_sigma * r.normal(
                size=(size, size)
            )
        if labels[i] == 1:
            for b in signal_bands:
                img[:, :, b] += _blob(size, r.child(1000 + b), signal_amplitude)
        if distractor_pool and r.uniform() < 0.5:
            b = distractor_pool[int(r.integers(0, len(distractor_pool)))]
            img[:, :, b] += _blob(size, r.child(2000 + b), 0.6 * signal_amplitude)
        if dead_band is not None:
            img[:, :, dead_band] = 0.0

        sid = f"s{i:04d}"
        fname = f"{sid}.mbt"
        write_mbt(MultiBandImage.wrap(img), out_dir / fname)
        rows.append(ManifestRow(id=sid, path=fname, label=int(labels[i])))

    manifest_path = out_dir / "manifest.csv"
    write_manifest(rows, manifest_path)
    return manifest_path
