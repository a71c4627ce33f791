import numpy as np
import pytest

from conftest import rand_image
from slidekit.core.image import MultiBandImage
from slidekit.core.normalize import (
    NormalizationStats,
    apply_normalization,
    fit_normalization,
    invert_normalization,
)
from slidekit.errors import DimensionError, EmptyDatasetError, UsageError


def _image_from_band_values(values):
    data = np.array(values, dtype=np.float64).reshape(-1, 1, 1)
    return MultiBandImage(data)


def test_standard_stats_match_direct_computation():
    # band values {1,2,3,4}: mean 2.5, population std sqrt(1.25)
    img = _image_from_band_values([1.0, 2.0, 3.0, 4.0])
    stats = fit_normalization([img], "standard")
    assert stats.center[0] == pytest.approx(2.5, abs=1e-15)
    assert stats.scale[0] == pytest.approx(np.sqrt(1.25), abs=1e-15)


def test_robust_stats_median_iqr():
    # {1,2,3,4,100}: median 3; linear-interpolation quartiles give IQR 2
    img = _image_from_band_values([1.0, 2.0, 3.0, 4.0, 100.0])
    stats = fit_normalization([img], "robust")
    assert stats.center[0] == pytest.approx(3.0, abs=1e-15)
    assert stats.scale[0] == pytest.approx(2.0, abs=1e-12)


def test_constant_band_scale_forced_to_one():
    img = MultiBandImage(np.full((3, 3, 2), 7.0))
    for mode in ("standard", "robust"):
        stats = fit_normalization([img], mode)
        np.testing.assert_array_equal(stats.scale, [1.0, 1.0])
        out = apply_normalization(img, stats)
        np.testing.assert_array_equal(out.data, np.zeros((3, 3, 2)))


def test_apply_identity_and_centering():
    stats = NormalizationStats("standard", center=np.zeros(2), scale=np.ones(2))
    img = rand_image(4, 4, 2, seed=3)
    np.testing.assert_array_equal(apply_normalization(img, stats).data, img.data)

    stats2 = NormalizationStats("standard", center=np.array([1.5, -2.0]), scale=np.ones(2))
    centered = MultiBandImage(np.broadcast_to(stats2.center, (4, 4, 2)).copy())
    np.testing.assert_array_equal(apply_normalization(centered, stats2).data, np.zeros((4, 4, 2)))


def test_round_trip_within_1e9():
    images = [rand_image(6, 5, 3, seed=s, scale=10.0) for s in range(4)]
    for mode in ("standard", "robust"):
        stats = fit_normalization(images, mode)
        for img in images:
            back = invert_normalization(apply_normalization(img, stats), stats)
            assert np.max(np.abs(back.data - img.data)) <= 1e-9


def test_fit_over_multiple_images_pools_pixels():
    a = _image_from_band_values([0.0])
    b = _image_from_band_values([2.0])
    stats = fit_normalization([a, b], "standard")
    assert stats.center[0] == pytest.approx(1.0)
    assert stats.scale[0] == pytest.approx(1.0)


def test_errors():
    with pytest.raises(EmptyDatasetError):
        fit_normalization([], "standard")
    with pytest.raises(UsageError):
        fit_normalization([rand_image(2, 2, 1)], "minmax")
    stats = fit_normalization([rand_image(2, 2, 2)], "standard")
    with pytest.raises(DimensionError):
        apply_normalization(rand_image(2, 2, 3), stats)
    with pytest.raises(UsageError):
        NormalizationStats("standard", center=np.zeros(2), scale=np.array([1.0, 0.0]))
