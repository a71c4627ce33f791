import numpy as np
import pytest

from slidekit.errors import UsageError
from slidekit.manifest import load_manifest, load_samples
from slidekit.synth import make_synth


@pytest.fixture(scope="module")
def small_synth(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    manifest_path = make_synth(
        out, n_samples=45, size=16, bands=6, imbalance=8.0,
        signal_bands=(1, 3), dead_band=5, seed=3,
    )
    return manifest_path


def test_counts_and_imbalance(small_synth):
    manifest = load_manifest(small_synth)
    labels = np.array(manifest.labels)
    assert labels.size == 45
    assert labels.sum() == 5  # round(45 / 9)
    assert (labels == 0).sum() == 40


def test_shapes_and_dead_band(small_synth):
    _, images, labels = load_samples(load_manifest(small_synth))
    for img in images:
        assert img.shape == (16, 16, 6)
        np.testing.assert_array_equal(img.data[:, :, 5], 0.0)


def test_signal_band_separates_classes(small_synth):
    _, images, labels = load_samples(load_manifest(small_synth))
    labels = np.array(labels)
    means = np.array([img.data[:, :, 1].mean() for img in images])
    assert means[labels == 1].mean() > means[labels == 0].mean() + 0.1


def test_deterministic_output(tmp_path):
    kwargs = dict(n_samples=12, size=16, bands=4, imbalance=3.0,
                  signal_bands=(0,), dead_band=3, seed=9)
    p1 = make_synth(tmp_path / "a", **kwargs)
    p2 = make_synth(tmp_path / "b", **kwargs)
    assert p1.read_text() == p2.read_text()
    m1, m2 = load_manifest(p1), load_manifest(p2)
    for r1, r2 in zip(m1.rows, m2.rows):
        assert m1.resolve(r1).read_bytes() == m2.resolve(r2).read_bytes()


def test_validation():
    with pytest.raises(UsageError):
        make_synth("/tmp/x", n_samples=1)
    with pytest.raises(UsageError):
        make_synth("/tmp/x", signal_bands=(99,))
    with pytest.raises(UsageError):
        make_synth("/tmp/x", signal_bands=(2,), dead_band=2)
    with pytest.raises(UsageError):
        make_synth("/tmp/x", imbalance=0.5)
