import pytest

from slidekit.errors import UsageError
from slidekit.model.backbone import (
    BackboneConfig,
    StageSpec,
    large_backbone_stages,
    stage_shapes,
)

EXPECTED_CHANNELS = (32, 32, 64, 96, 192, 224, 384, 640, 1280)
EXPECTED_LAYERS = (1, 4, 7, 7, 10, 19, 25, 7, 1)
EXPECTED_STRIDES = (2, 1, 2, 2, 2, 1, 2, 1, 1)


def test_default_schedule_channels_and_layers():
    stages = large_backbone_stages()
    assert tuple(s.out_channels for s in stages) == EXPECTED_CHANNELS
    assert tuple(s.num_layers for s in stages) == EXPECTED_LAYERS
    assert tuple(s.stride for s in stages) == EXPECTED_STRIDES


def test_default_operators():
    ops = [s.operator for s in large_backbone_stages()]
    assert ops[0] == "conv"
    assert ops[1:4] == ["fused_mbconv"] * 3
    assert ops[4:8] == ["mbconv_se"] * 4
    assert ops[8] == "head"


def test_downsample_factors_at_256():
    shapes = stage_shapes(BackboneConfig(input_size=256))
    downs = tuple(s.cumulative_downsample for s in shapes)
    assert downs[:8] == (2, 2, 4, 8, 16, 16, 32, 32)
    assert downs[7] == 32  # total stride 32 by stage 7


def test_stage3_output_is_32x32x96():
    shapes = stage_shapes(BackboneConfig(input_size=256))
    s3 = shapes[3]
    assert (s3.out_height, s3.out_width, s3.out_channels) == (32, 32, 96)


def test_final_stage_channels_1280():
    shapes = stage_shapes(BackboneConfig(input_size=256))
    assert shapes[8].out_channels == 1280
    assert (shapes[8].out_height, shapes[8].out_width) == (8, 8)


def test_identity_stage_keeps_dims():
    cfg = BackboneConfig(
        stages=[StageSpec("conv", 3, None, 1, 8, 1)], input_channels=3, input_size=50
    )
    (shape,) = stage_shapes(cfg)
    assert (shape.out_height, shape.out_width) == (50, 50)
    assert shape.cumulative_downsample == 1


def test_odd_sizes_round_up_on_stride_two():
    cfg = BackboneConfig(
        stages=[StageSpec("conv", 3, None, 2, 8, 1)], input_channels=3, input_size=25
    )
    (shape,) = stage_shapes(cfg)
    assert (shape.out_height, shape.out_width) == (13, 13)


def test_stage_validation():
    with pytest.raises(UsageError):
        StageSpec("conv", 3, None, 3, 8, 1)
    with pytest.raises(UsageError):
        StageSpec("dense", 3, None, 1, 8, 1)
    with pytest.raises(UsageError):
        BackboneConfig(stages=[])
