"""Stage-schedule description of the full-scale reference backbone.

This is a shape calculator, not a trainable network: it records the
operator/stride/channel/layer schedule of the large EfficientNetV2-style
backbone and propagates spatial dimensions through it, so configurations
can be checked without instantiating millions of parameters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from ..errors import UsageError

OPERATORS = ("conv", "fused_mbconv", "mbconv_se", "head")


@dataclass(frozen=True)
class StageSpec:
    operator: str
    kernel: int
    expand: int | None
    stride: int  # applies to the first layer of the stage only
    out_channels: int
    num_layers: int

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise UsageError(f"operator must be one of {OPERATORS}, got {self.operator!r}")
        if self.stride not in (1, 2):
            raise UsageError(f"stride must be 1 or 2, got {self.stride}")
        if self.out_channels < 1 or self.num_layers < 1 or self.kernel < 1:
            raise UsageError("kernel, out_channels and num_layers must be positive")


def large_backbone_stages() -> list[StageSpec]:
    """The nine-stage large-model schedule this project treats as reference."""
    rows = [
        ("conv", 3, None, 2, 32, 1),
        ("fused_mbconv", 3, 1, 1, 32, 4),
        ("fused_mbconv", 3, 4, 2, 64, 7),
        ("fused_mbconv", 3, 4, 2, 96, 7),
        ("mbconv_se", 3, 4, 2, 192, 10),
        ("mbconv_se", 3, 6, 1, 224, 19),
        ("mbconv_se", 3, 6, 2, 384, 25),
        ("mbconv_se", 3, 6, 1, 640, 7),
        ("head", 1, None, 1, 1280, 1),
    ]
    return [StageSpec(*row) for row in rows]


@dataclass(frozen=True)
class BackboneConfig:
    stages: list[StageSpec] = field(default_factory=large_backbone_stages)
    input_channels: int = 3
    input_size: int = 256

    def __post_init__(self):
        if not self.stages:
            raise UsageError("backbone config needs at least one stage")
        if self.input_channels < 1 or self.input_size < 1:
            raise UsageError("input_channels and input_size must be positive")


class StageShape(NamedTuple):
    stage: int
    out_height: int
    out_width: int
    out_channels: int
    cumulative_downsample: int


def stage_shapes(cfg: BackboneConfig) -> list[StageShape]:
    """Spatial dims and channels after each stage; strides floor-divide."""
    h = w = cfg.input_size
    down = 1
    out = []
    for i, st in enumerate(cfg.stages):
        if st.stride == 2:
            h = max(1, (h + 1) // 2)
            w = max(1, (w + 1) // 2)
            down *= 2
        out.append(StageShape(i, h, w, st.out_channels, down))
    return out
