import numpy as np
import pytest

from conftest import rand_image
from slidekit.core.image import MultiBandImage
from slidekit.core.normalize import fit_normalization
from slidekit.core.rng import RngState
from slidekit.errors import UsageError
from slidekit.evaluation.occlusion import (
    occlusion_importance,
    write_occlusion_csv,
    write_occlusion_svg,
)
from slidekit.model.network import CompactCnnConfig, init_compact_cnn
from slidekit.predictor import Predictor


def _predictor(in_channels=3, seed=0, zero_into_band=None):
    net = init_compact_cnn(
        CompactCnnConfig(in_channels=in_channels, conv_channels=(4, 4), kernel=3, embed_dim=6),
        RngState(seed),
    )
    if zero_into_band is not None:
        net.params["conv1_w"][:, :, zero_into_band, :] = 0.0
    return Predictor(net=net)


def test_dead_band_has_exactly_zero_drop():
    # zero conv weights into band 1: occluding it cannot change anything
    predictor = _predictor(zero_into_band=1)
    images = [rand_image(8, 8, 3, seed=s) for s in range(5)]
    report = occlusion_importance(predictor, images)
    by_band = {row.band: row for row in report.bands}
    assert by_band[1].total_drop == 0.0
    assert by_band[1].mean_drop == 0.0


def test_all_zero_band_has_exactly_zero_drop():
    # a band that is already all zeros is untouched by occlusion
    predictor = _predictor()
    images = []
    for s in range(4):
        data = np.random.default_rng(s).normal(size=(8, 8, 3))
        data[:, :, 2] = 0.0
        images.append(MultiBandImage(data))
    report = occlusion_importance(predictor, images)
    by_band = {row.band: row for row in report.bands}
    assert by_band[2].total_drop == 0.0


def test_signal_band_ranked_first():
    # only band 0 differs between the images and the model reacts to it
    rng = RngState(1)
    net = init_compact_cnn(
        CompactCnnConfig(in_channels=2, conv_channels=(4, 4), kernel=3, embed_dim=6),
        rng,
    )
    predictor = Predictor(net=net)
    images = []
    for s in range(6):
        data = np.zeros((8, 8, 2))
        data[:, :, 0] = 2.0 + np.random.default_rng(s).normal(size=(8, 8)) * 0.1
        data[:, :, 1] = 0.5  # constant nuisance both classes share
        images.append(MultiBandImage(data))
    report = occlusion_importance(predictor, images)
    assert report.bands[0].band == 0
    assert report.bands[0].rank == 1


def test_ranks_are_permutation_and_sorted():
    predictor = _predictor()
    images = [rand_image(8, 8, 3, seed=s) for s in range(4)]
    report = occlusion_importance(predictor, images)
    assert sorted(r.rank for r in report.bands) == [1, 2, 3]
    drops = [r.mean_drop for r in report.bands]
    assert drops == sorted(drops, reverse=True)


def test_order_invariance():
    predictor = _predictor()
    images = [rand_image(8, 8, 3, seed=s) for s in range(6)]
    r1 = occlusion_importance(predictor, images)
    r2 = occlusion_importance(predictor, images[::-1])
    assert [b.band for b in r1.bands] == [b.band for b in r2.bands]
    for a, b in zip(r1.bands, r2.bands):
        assert a.total_drop == pytest.approx(b.total_drop, abs=1e-12)


def test_all_bands_prior_row():
    predictor = _predictor()
    images = [rand_image(8, 8, 3, seed=s) for s in range(3)]
    report = occlusion_importance(predictor, images)
    zero = MultiBandImage(np.zeros((8, 8, 3)))
    prior = predictor.proba_landslide([zero])[0]
    assert report.all_bands_probability == pytest.approx(prior, abs=1e-15)


def test_normalization_applied_before_model():
    images = [rand_image(8, 8, 3, seed=s, scale=5.0) for s in range(4)]
    stats = fit_normalization(images, "standard")
    net = init_compact_cnn(
        CompactCnnConfig(in_channels=3, conv_channels=(4, 4), kernel=3, embed_dim=6),
        RngState(2),
    )
    report = occlusion_importance(Predictor(net=net, stats=stats), images)
    assert len(report.bands) == 3
    assert np.isfinite([r.mean_drop for r in report.bands]).all()


def test_band_names_and_csv_svg(tmp_path):
    predictor = _predictor()
    images = [rand_image(8, 8, 3, seed=s) for s in range(3)]
    report = occlusion_importance(predictor, images, band_names=["red", "nir", "vv"])
    csv_path = tmp_path / "occ.csv"
    svg_path = tmp_path / "occ.svg"
    write_occlusion_csv(report, csv_path)
    write_occlusion_svg(report, svg_path)
    text = csv_path.read_text()
    assert "rank,band,name" in text
    assert "all_bands" in text  # sanity row present
    assert "red" in text and "vv" in text
    svg = svg_path.read_text()
    assert svg.startswith("<svg") and "red" in svg

    with pytest.raises(UsageError):
        occlusion_importance(predictor, images, band_names=["a", "b"])


def test_empty_image_set_rejected():
    with pytest.raises(UsageError):
        occlusion_importance(_predictor(), [])
