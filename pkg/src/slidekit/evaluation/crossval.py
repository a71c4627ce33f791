"""Stratified k-fold evaluation of the full pipeline.

Per fold: SMOTE oversampling and normalization statistics come from the
training folds only, the backbone trains with online augmentation and
keeps its best epoch by validation F1, the SVM head fits on frozen
training embeddings, and both heads score the held-out fold. Synthetic
provenance (anchor id, neighbor id, weight) is recorded so leakage
checks stay possible.

`paper_mode` instead applies SMOTE once to the whole dataset before fold
assignment, reproducing the upstream protocol in which synthetic
near-duplicates can land in validation folds.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ..augment.policy import AugmentPolicy
from ..augment.smote import SmoteConfig, smote_ssim_detailed
from ..core.image import MultiBandImage
from ..core.normalize import NormalizationStats, apply_normalization, fit_normalization
from ..core.rng import RngState
from ..errors import SlidekitError, UsageError
from ..model.network import CompactCnn, CompactCnnConfig, init_compact_cnn
from ..model.optim import LrSchedule
from ..model.training import EpochMetrics, predict_embeddings, predict_labels, train
from ..svm.head import fit_head, head_predict
from ..svm.smo import SvmConfig, SvmModel
from .folds import FoldPlan, make_folds
from .metrics import ConfusionCounts, confusion, f1


@dataclass(frozen=True)
class PipelineSettings:
    conv_channels: tuple[int, ...] = (16, 32)
    kernel: int = 3
    embed_dim: int = 64
    epochs: int = 50
    batch_size: int = 36
    schedule: LrSchedule = field(default_factory=LrSchedule)
    policy: AugmentPolicy = field(default_factory=AugmentPolicy)
    norm_mode: str = "standard"
    smote_enabled: bool = True
    smote: SmoteConfig = field(default_factory=SmoteConfig)
    smote_auto_balance: bool = True  # override n_syn to roughly equalize classes
    svm: SvmConfig = field(default_factory=SvmConfig)


@dataclass(frozen=True)
class SyntheticProvenance:
    synthetic_id: str
    anchor_id: str
    neighbor_id: str
    lam: float


@dataclass
class FoldResult:
    fold: int
    fc_counts: ConfusionCounts
    fc_f1: float
    svm_counts: ConfusionCounts
    svm_f1: float
    best_epoch: int | None
    net: CompactCnn
    stats: NormalizationStats
    svm_model: SvmModel
    metrics: list[EpochMetrics]
    synthetics: list[SyntheticProvenance]
    train_ids: list[str]
    val_ids: list[str]


@dataclass
class CrossvalResult:
    folds: list[FoldResult]
    plan: FoldPlan
    paper_mode: bool
    global_synthetics: list[SyntheticProvenance]  # only set in paper mode

    @property
    def mean_fc_f1(self) -> float:
        return float(np.mean([fr.fc_f1 for fr in self.folds]))

    @property
    def mean_svm_f1(self) -> float:
        return float(np.mean([fr.svm_f1 for fr in self.folds]))


def _auto_n_syn(n_min: int, n_maj: int) -> int:
    return max(1, (n_maj - n_min) // n_min)


def _oversample(
    ids: list[str],
    images: list[MultiBandImage],
    labels: np.ndarray,
    settings: PipelineSettings,
    rng: RngState,
    id_prefix: str,
) -> tuple[list[str], list[MultiBandImage], np.ndarray, list[SyntheticProvenance]]:
    counts = np.bincount(labels, minlength=2)
    if counts[0] == counts[1]:
        return ids, images, labels, []
    minority = int(np.argmin(counts))
    min_pos = np.flatnonzero(labels == minority)
    cfg = settings.smote
    if settings.smote_auto_balance:
        cfg = replace(cfg, n_syn=_auto_n_syn(int(counts[minority]), int(counts[1 - minority])))
    records = smote_ssim_detailed([images[i] for i in min_pos], cfg, rng)

    out_ids, out_images = list(ids), list(images)
    out_labels = list(labels)
    provenance = []
    for i, rec in enumerate(records):
        sid = f"{id_prefix}syn_{i:05d}"
        out_ids.append(sid)
        out_images.append(rec.image)
        out_labels.append(minority)
        provenance.append(
            SyntheticProvenance(sid, ids[min_pos[rec.anchor]], ids[min_pos[rec.neighbor]], rec.lam)
        )
    return out_ids, out_images, np.array(out_labels), provenance


def _run_fold(
    fold: int,
    ids: list[str],
    images: list[MultiBandImage],
    labels: np.ndarray,
    plan: FoldPlan,
    settings: PipelineSettings,
    rng: RngState,
    smote_in_fold: bool,
) -> FoldResult:
    tr_idx = plan.train_indices(fold)
    va_idx = plan.val_indices(fold)
    tr_ids = [ids[i] for i in tr_idx]
    tr_images = [images[i] for i in tr_idx]
    tr_labels = labels[tr_idx]
    va_images = [images[i] for i in va_idx]
    va_labels = labels[va_idx]

    synthetics: list[SyntheticProvenance] = []
    if smote_in_fold and settings.smote_enabled:
        tr_ids, tr_images, tr_labels, synthetics = _oversample(
            tr_ids, tr_images, tr_labels, settings, rng.child(0), f"fold{fold}_"
        )
        train_id_set = set(tr_ids)
        for rec in synthetics:  # leakage guard: parents must live in this training fold
            assert rec.anchor_id in train_id_set and rec.neighbor_id in train_id_set

    stats = fit_normalization(tr_images, settings.norm_mode)
    tr_norm = [apply_normalization(im, stats) for im in tr_images]
    va_norm = [apply_normalization(im, stats) for im in va_images]

    net0 = init_compact_cnn(
        CompactCnnConfig(
            in_channels=tr_images[0].channels,
            conv_channels=settings.conv_channels,
            kernel=settings.kernel,
            embed_dim=settings.embed_dim,
        ),
        rng.child(1),
    )
    result = train(
        net0,
        list(zip(tr_norm, (int(v) for v in tr_labels))),
        settings.policy,
        settings.schedule,
        settings.epochs,
        settings.batch_size,
        rng.child(2),
        val_samples=list(zip(va_norm, (int(v) for v in va_labels))),
    )

    fc_pred = predict_labels(result.net, va_norm)
    fc_counts = confusion(va_labels, fc_pred)

    emb_train = predict_embeddings(result.net, tr_norm)
    svm_model = fit_head(emb_train, tr_labels, settings.svm, rng.child(3))
    svm_pred = head_predict(svm_model, predict_embeddings(result.net, va_norm))
    svm_counts = confusion(va_labels, svm_pred)

    return FoldResult(
        fold=fold,
        fc_counts=fc_counts,
        fc_f1=f1(fc_counts),
        svm_counts=svm_counts,
        svm_f1=f1(svm_counts),
        best_epoch=result.best_epoch,
        net=result.net,
        stats=stats,
        svm_model=svm_model,
        metrics=result.metrics,
        synthetics=synthetics,
        train_ids=tr_ids,
        val_ids=[ids[i] for i in va_idx],
    )


def cross_validate(
    ids: Sequence[str],
    images: Sequence[MultiBandImage],
    labels: Sequence[int],
    settings: PipelineSettings,
    k: int,
    rng: RngState,
    paper_mode: bool = False,
) -> CrossvalResult:
    ids = [str(s) for s in ids]
    images = list(images)
    y = np.asarray(labels, dtype=np.int64)
    if not (len(ids) == len(images) == y.size):
        raise UsageError("ids, images and labels must have equal lengths")
    if not np.all(np.isin(y, (0, 1))):
        raise UsageError("labels must be 0 or 1")

    global_synthetics: list[SyntheticProvenance] = []
    if paper_mode and settings.smote_enabled:
        ids, images, y, global_synthetics = _oversample(
            ids, images, y, settings, rng.child(0), "global_"
        )

    plan = make_folds(y, k, rng.child(0xF01D))
    folds = []
    for fold in range(k):
        try:
            folds.append(
                _run_fold(fold, ids, images, y, plan, settings, rng.child(1 + fold), not paper_mode)
            )
        except SlidekitError as exc:
            raise type(exc)(f"fold {fold}: {exc}") from exc
    return CrossvalResult(folds=folds, plan=plan, paper_mode=paper_mode, global_synthetics=global_synthetics)
