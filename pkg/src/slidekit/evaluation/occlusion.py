"""Band-wise occlusion importance.

Each band of the raw input is zeroed in turn and the drop in the
predicted landslide probability, accumulated over the given images,
estimates that band's contribution. Because the score assumed by the
positive class is debatable, the report carries both the drop relative
to the model's actual baseline probability and the drop relative to an
assumed probability of 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.image import MultiBandImage
from ..errors import UsageError
from ..predictor import Predictor


@dataclass(frozen=True)
class BandImportance:
    band: int
    name: str
    total_drop: float
    mean_drop: float
    total_drop_assume_one: float
    mean_drop_assume_one: float
    rank: int


@dataclass(frozen=True)
class OcclusionReport:
    bands: list[BandImportance]  # sorted by rank
    baseline_mean_probability: float
    all_bands_probability: float  # zero-input prior
    logistic_a: float
    n_images: int


def _zero_band(img: MultiBandImage, band: int) -> MultiBandImage:
    out = np.array(img.data, copy=True)
    out[:, :, band] = 0.0
    return MultiBandImage.wrap(out)


def occlusion_importance(
    predictor: Predictor,
    images: Sequence[MultiBandImage],
    band_names: Sequence[str] | None = None,
) -> OcclusionReport:
    images = list(images)
    if not images:
        raise UsageError("occlusion analysis needs at least one image")
    predictor.check_bands(images)
    channels = images[0].channels
    if band_names is None:
        band_names = [f"band_{b}" for b in range(channels)]
    if len(band_names) != channels:
        raise UsageError(f"got {len(band_names)} band names for {channels} bands")

    p_orig = predictor.proba_landslide(images)
    rows = []
    for b in range(channels):
        p_occ = predictor.proba_landslide([_zero_band(img, b) for img in images])
        drops = p_orig - p_occ
        assume_one = 1.0 - p_occ
        rows.append(
            {
                "band": b,
                "name": band_names[b],
                "total_drop": float(drops.sum()),
                "mean_drop": float(drops.mean()),
                "total_drop_assume_one": float(assume_one.sum()),
                "mean_drop_assume_one": float(assume_one.mean()),
            }
        )

    order = sorted(range(channels), key=lambda i: (-rows[i]["mean_drop"], rows[i]["band"]))
    ranked = [BandImportance(rank=r + 1, **rows[i]) for r, i in enumerate(order)]

    zeroed = MultiBandImage.wrap(np.zeros_like(images[0].data))
    prior = float(predictor.proba_landslide([zeroed])[0])
    return OcclusionReport(
        bands=ranked,
        baseline_mean_probability=float(p_orig.mean()),
        all_bands_probability=prior,
        logistic_a=predictor.logistic_a,
        n_images=len(images),
    )


def write_occlusion_csv(report: OcclusionReport, path) -> None:
    lines = [
        f"# n_images={report.n_images} logistic_a={report.logistic_a!r} "
        f"baseline_mean_probability={report.baseline_mean_probability!r} "
        f"all_bands_probability={report.all_bands_probability!r}",
        "rank,band,name,mean_drop,total_drop,mean_drop_assume_one,total_drop_assume_one",
    ]
    for row in report.bands:
        lines.append(
            f"{row.rank},{row.band},{row.name},{row.mean_drop!r},{row.total_drop!r},"
            f"{row.mean_drop_assume_one!r},{row.total_drop_assume_one!r}"
        )
    # sanity row: every band zeroed at once collapses to the zero-input prior
    drop_all = report.baseline_mean_probability - report.all_bands_probability
    lines.append(
        f"0,-1,all_bands,{drop_all!r},{drop_all * report.n_images!r},"
        f"{1.0 - report.all_bands_probability!r},{(1.0 - report.all_bands_probability) * report.n_images!r}"
    )
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def write_occlusion_svg(report: OcclusionReport, path) -> None:
    """Deterministic horizontal bar chart of mean drop per band."""
    bar_h, gap, left, width = 22, 6, 170, 420
    n = len(report.bands)
    height = 40 + n * (bar_h + gap)
    peak = max(abs(r.mean_drop) for r in report.bands) or 1.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{left + width + 90}" height="{height}">',
        '<text x="10" y="20" font-family="monospace" font-size="14">'
        "band occlusion importance (mean probability drop)</text>",
    ]
    for i, row in enumerate(report.bands):
        y = 36 + i * (bar_h + gap)
        w = abs(row.mean_drop) / peak * width
        color = "#b4464b" if row.mean_drop >= 0 else "#4664b4"
        parts.append(
            f'<text x="10" y="{y + 15}" font-family="monospace" font-size="12">{row.name}</text>'
        )
        parts.append(
            f'<rect x="{left}" y="{y}" width="{w:.2f}" height="{bar_h}" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{left + w + 6:.2f}" y="{y + 15}" font-family="monospace" '
            f'font-size="12">{row.mean_drop:.6g}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(parts) + "\n")
