"""Inference bundle: normalization + backbone + optional SVM head."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core.image import LANDSLIDE, MultiBandImage
from .core.normalize import NormalizationStats, apply_normalization
from .errors import DimensionError
from .model.network import CompactCnn, forward, softmax
from .svm.head import head_decision, head_predict
from .svm.smo import SvmModel

_BATCH = 64


@dataclass
class Predictor:
    net: CompactCnn
    stats: NormalizationStats | None = None
    svm_model: SvmModel | None = None
    logistic_a: float = 1.0  # decision-score squashing for probabilities

    def _prepared(self, images: Sequence[MultiBandImage]) -> list[MultiBandImage]:
        if self.stats is None:
            return list(images)
        return [apply_normalization(img, self.stats) for img in images]

    def _forward_all(self, images: Sequence[MultiBandImage]):
        prepared = self._prepared(images)
        embs, logits = [], []
        for start in range(0, len(prepared), _BATCH):
            x = np.stack([im.data for im in prepared[start : start + _BATCH]])
            res = forward(self.net, x)
            embs.append(res.embeddings)
            logits.append(res.logits)
        return np.concatenate(embs, axis=0), np.concatenate(logits, axis=0)

    def embeddings(self, images: Sequence[MultiBandImage]) -> np.ndarray:
        if not images:
            return np.zeros((0, self.net.embed_dim))
        return self._forward_all(images)[0]

    def proba_landslide(self, images: Sequence[MultiBandImage]) -> np.ndarray:
        """P(landslide): softmax for the FC head, sigma(a*f) for the SVM head."""
        if not images:
            return np.zeros(0)
        emb, logits = self._forward_all(images)
        if self.svm_model is None:
            return softmax(logits)[:, LANDSLIDE]
        scores = head_decision(self.svm_model, emb)
        return 1.0 / (1.0 + np.exp(-self.logistic_a * scores))

    def predict(self, images: Sequence[MultiBandImage]) -> np.ndarray:
        """Hard {0, 1} labels; ties resolve to landslide."""
        if not images:
            return np.zeros(0, dtype=np.int64)
        emb, logits = self._forward_all(images)
        if self.svm_model is None:
            return (logits[:, LANDSLIDE] >= logits[:, 1 - LANDSLIDE]).astype(np.int64)
        return head_predict(self.svm_model, emb)

    def check_bands(self, images: Sequence[MultiBandImage]) -> None:
        want = self.net.config.in_channels if self.stats is None else self.stats.bands
        for img in images:
            if img.channels != want:
                raise DimensionError(
                    f"image has {img.channels} bands but the model expects {want}"
                )
