"""Backbone schedule, compact CNN, soft-label loss, Adam, training loop."""

from .backbone import BackboneConfig, StageShape, StageSpec, large_backbone_stages, stage_shapes
from .checkpoint import load_checkpoint, save_checkpoint
from .loss import kl_soft_loss
from .network import (
    CompactCnn,
    CompactCnnConfig,
    backward,
    forward,
    init_compact_cnn,
    param_order,
    softmax,
)
from .optim import AdamState, LrSchedule, adam_step, init_adam, lr_at
from .training import (
    EpochMetrics,
    TrainResult,
    gradient_check,
    predict_embeddings,
    predict_labels,
    predict_logits,
    train,
)

__all__ = [
    "AdamState",
    "BackboneConfig",
    "CompactCnn",
    "CompactCnnConfig",
    "EpochMetrics",
    "LrSchedule",
    "StageShape",
    "StageSpec",
    "TrainResult",
    "adam_step",
    "backward",
    "forward",
    "gradient_check",
    "init_adam",
    "init_compact_cnn",
    "kl_soft_loss",
    "large_backbone_stages",
    "load_checkpoint",
    "lr_at",
    "param_order",
    "predict_embeddings",
    "predict_labels",
    "predict_logits",
    "save_checkpoint",
    "softmax",
    "stage_shapes",
    "train",
]
