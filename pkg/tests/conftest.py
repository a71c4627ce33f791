import numpy as np
import pytest

from slidekit.core.image import MultiBandImage
from slidekit.core.rng import RngState


def rand_image(h: int, w: int, c: int, seed: int = 0, scale: float = 1.0) -> MultiBandImage:
    data = np.random.default_rng(seed).normal(size=(h, w, c)) * scale
    return MultiBandImage(data)


@pytest.fixture
def rng() -> RngState:
    return RngState(1234)
