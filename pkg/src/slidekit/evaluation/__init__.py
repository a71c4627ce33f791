"""F1, stratified folds, cross-validation harness, occlusion, embedding export."""

from .crossval import (
    CrossvalResult,
    FoldResult,
    PipelineSettings,
    SyntheticProvenance,
    cross_validate,
)
from .embeddings import export_embeddings
from .folds import FoldPlan, make_folds
from .metrics import ConfusionCounts, confusion, f1
from .occlusion import (
    BandImportance,
    OcclusionReport,
    occlusion_importance,
    write_occlusion_csv,
    write_occlusion_svg,
)

__all__ = [
    "BandImportance",
    "ConfusionCounts",
    "CrossvalResult",
    "FoldPlan",
    "FoldResult",
    "OcclusionReport",
    "PipelineSettings",
    "SyntheticProvenance",
    "confusion",
    "cross_validate",
    "export_embeddings",
    "f1",
    "make_folds",
    "occlusion_importance",
    "write_occlusion_csv",
    "write_occlusion_svg",
]
