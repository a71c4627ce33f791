"""slidekit: imbalanced landslide classification from multi-band rasters.

Pipeline pieces: SSIM-guided SMOTE oversampling, cutmix/mixup/color/
geometric batch augmentation, a compact CNN embedding backbone trained
with soft-label KL divergence, an RBF-SVM post-classifier trained by
SMO, stratified k-fold evaluation, and band-occlusion importance.
"""

from . import augment, core, evaluation, model, svm
from .config import RunConfig, config_from_dict, config_to_dict, load_config, save_config
from .errors import (
    DataError,
    DegenerateDataError,
    DimensionError,
    EmptyDatasetError,
    InsufficientDataError,
    NumericError,
    SlidekitError,
    UsageError,
)
from .manifest import DatasetManifest, ManifestRow, load_manifest, load_samples, write_manifest
from .predictor import Predictor
from .synth import make_synth

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "DatasetManifest",
    "DegenerateDataError",
    "DimensionError",
    "EmptyDatasetError",
    "InsufficientDataError",
    "ManifestRow",
    "NumericError",
    "Predictor",
    "RunConfig",
    "SlidekitError",
    "UsageError",
    "augment",
    "config_from_dict",
    "config_to_dict",
    "core",
    "evaluation",
    "load_config",
    "load_manifest",
    "load_samples",
    "make_synth",
    "model",
    "save_config",
    "svm",
    "write_manifest",
]
