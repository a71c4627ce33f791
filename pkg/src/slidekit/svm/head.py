"""SVM post-classifier over frozen backbone embeddings."""
from __future__ import annotations

import numpy as np

from ..core.rng import RngState
from ..errors import DegenerateDataError, DimensionError, UsageError
from .smo import SvmConfig, SvmModel, decision_batch, fit_smo


def fit_head(
    embeddings: np.ndarray, hard_labels: np.ndarray, cfg: SvmConfig, rng: RngState
) -> SvmModel:
    """Standardize embeddings, fit the SVM, and keep the standardization.

    `hard_labels` uses the dataset convention {0, 1}; internally 1 maps
    to +1 (landslide) and 0 to -1.
    """
    emb = np.asarray(embeddings, dtype=np.float64)
    labels = np.asarray(hard_labels)
    if emb.ndim != 2 or labels.shape != (emb.shape[0],):
        raise DimensionError(
            f"expected embeddings (N, D) with N labels, got {emb.shape} and {labels.shape}"
        )
    if not np.all(np.isin(labels, (0, 1))):
        raise UsageError("hard labels must be 0 or 1")
    if len(np.unique(labels)) < 2:
        raise DegenerateDataError("head fitting needs both classes present")

    center = emb.mean(axis=0)
    scale = emb.std(axis=0)
    scale = np.where(scale == 0.0, 1.0, scale)
    y = np.where(labels == 1, 1.0, -1.0)

    model = fit_smo((emb - center) / scale, y, cfg, rng)
    model.embed_center = center
    model.embed_scale = scale
    return model


def head_decision(model: SvmModel, embeddings: np.ndarray) -> np.ndarray:
    """Decision scores for raw (unstandardized) embeddings."""
    emb = np.asarray(embeddings, dtype=np.float64)
    if model.embed_center is not None:
        emb = (emb - model.embed_center) / model.embed_scale
    return decision_batch(model, emb)


def head_predict(model: SvmModel, embeddings: np.ndarray) -> np.ndarray:
    """{0, 1} labels from raw embeddings; zero score counts as landslide."""
    return (head_decision(model, embeddings) >= 0.0).astype(np.int64)


def head_probability(model: SvmModel, embeddings: np.ndarray, logistic_a: float = 1.0) -> np.ndarray:
    """Monotone logistic squashing sigma(a * f(x)) of the decision score."""
    return 1.0 / (1.0 + np.exp(-logistic_a * head_decision(model, embeddings)))
