"""Dataset manifest: CSV of sample id, raster path, label, and extras.

Columns: id,path,label plus optional fold and synthetic provenance
(anchor,neighbor,lambda). Paths may be relative; they resolve against
the manifest file's directory.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .core.image import MultiBandImage, select_bands
from .core.mbt import read_mbt
from .core.resize import resize_bilinear
from .errors import DataError, EmptyDatasetError

_COLUMNS = ["id", "path", "label", "fold", "anchor", "neighbor", "lambda"]


@dataclass(frozen=True)
class ManifestRow:
    id: str
    path: str
    label: int
    fold: int | None = None
    anchor: str | None = None
    neighbor: str | None = None
    lam: float | None = None


@dataclass
class DatasetManifest:
    rows: list[ManifestRow]
    root: Path  # base directory for relative paths

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.rows]

    @property
    def labels(self) -> list[int]:
        return [r.label for r in self.rows]

    def resolve(self, row: ManifestRow) -> Path:
        p = Path(row.path)
        return p if p.is_absolute() else self.root / p


def load_manifest(path, check_files: bool = True) -> DatasetManifest:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None:
                raise DataError(f"{path}: empty manifest")
            missing = {"id", "path", "label"} - set(reader.fieldnames)
            if missing:
                raise DataError(f"{path}: missing required columns {sorted(missing)}")
            unknown = set(reader.fieldnames) - set(_COLUMNS)
            if unknown:
                raise DataError(f"{path}: unknown columns {sorted(unknown)}")
            raw = list(reader)
    except OSError as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc

    rows: list[ManifestRow] = []
    seen: set[str] = set()
    for lineno, rec in enumerate(raw, start=2):
        sid = (rec.get("id") or "").strip()
        rpath = (rec.get("path") or "").strip()
        if not sid or not rpath:
            raise DataError(f"{path}:{lineno}: id and path are required")
        if sid in seen:
            raise DataError(f"{path}:{lineno}: duplicate id {sid!r}")
        seen.add(sid)
        try:
            label = int(rec["label"])
        except (ValueError, TypeError) as exc:
            raise DataError(f"{path}:{lineno}: bad label {rec.get('label')!r}") from exc
        if label not in (0, 1):
            raise DataError(f"{path}:{lineno}: label must be 0 or 1, got {label}")

        def opt(field, conv):
            v = (rec.get(field) or "").strip()
            if not v:
                return None
            try:
                return conv(v)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad {field} value {v!r}") from exc

        rows.append(
            ManifestRow(
                id=sid,
                path=rpath,
                label=label,
                fold=opt("fold", int),
                anchor=opt("anchor", str),
                neighbor=opt("neighbor", str),
                lam=opt("lambda", float),
            )
        )

    manifest = DatasetManifest(rows=rows, root=path.parent)
    if check_files:
        for lineno, row in enumerate(manifest.rows, start=2):
            full = manifest.resolve(row)
            if not full.is_file():
                raise DataError(f"{path}:{lineno}: referenced file not found: {full}")
    return manifest


def write_manifest(rows: list[ManifestRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    r.id,
                    r.path,
                    r.label,
                    "" if r.fold is None else r.fold,
                    r.anchor or "",
                    r.neighbor or "",
                    "" if r.lam is None else repr(r.lam),
                ]
            )


def load_samples(
    manifest: DatasetManifest,
    image_size: int | None = None,
    band_subset: list[int] | None = None,
) -> tuple[list[str], list[MultiBandImage], list[int]]:
    """Load every raster, optionally resizing and selecting bands."""
    if not manifest.rows:
        raise EmptyDatasetError("manifest has no rows")
    ids, images, labels = [], [], []
    for row in manifest.rows:
        img = read_mbt(manifest.resolve(row))
        if image_size is not None and (img.height, img.width) != (image_size, image_size):
            img = resize_bilinear(img, image_size, image_size)
        if band_subset is not None:
            img = select_bands(img, band_subset)
        ids.append(row.id)
        images.append(img)
        labels.append(row.label)
    return ids, images, labels
