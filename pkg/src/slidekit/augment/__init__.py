"""Offline SMOTE oversampling and online batch augmentation."""

from .mixing import MixResult, cutmix, mixup
from .policy import AugmentPolicy, apply_policy
from .smote import SmoteConfig, SyntheticRecord, blend, smote_ssim, smote_ssim_detailed

__all__ = [
    "AugmentPolicy",
    "MixResult",
    "SmoteConfig",
    "SyntheticRecord",
    "apply_policy",
    "blend",
    "cutmix",
    "mixup",
    "smote_ssim",
    "smote_ssim_detailed",
]
