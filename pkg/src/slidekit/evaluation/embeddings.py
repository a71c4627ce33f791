"""CSV export of backbone embeddings for external projection tools."""
from __future__ import annotations

from typing import Sequence

from ..core.image import MultiBandImage
from ..errors import DataError, EmptyDatasetError, UsageError
from ..predictor import Predictor


def export_embeddings(
    predictor: Predictor,
    ids: Sequence[str],
    images: Sequence[MultiBandImage],
    labels: Sequence[int],
    path,
) -> None:
    """One row per sample: id, label, e_0..e_{D-1}. Deterministic formatting."""
    if not (len(ids) == len(images) == len(labels)):
        raise UsageError("ids, images and labels must have equal lengths")
    if not images:
        raise EmptyDatasetError("no samples to export")
    emb = predictor.embeddings(images)
    dim = emb.shape[1]
    lines = ["id,label," + ",".join(f"e_{i}" for i in range(dim))]
    for sid, label, row in zip(ids, labels, emb):
        values = ",".join(format(float(v), ".9g") for v in row)
        lines.append(f"{sid},{int(label)},{values}")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise DataError(f"cannot write embeddings to {path}: {exc}") from exc
