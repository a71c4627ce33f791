"""Mini-batch training loop and finite-difference gradient validation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..augment.policy import AugmentPolicy, apply_policy
from ..core.image import LANDSLIDE, MultiBandImage, SoftLabel
from ..core.rng import RngState
from ..errors import EmptyDatasetError, UsageError
from .loss import kl_soft_loss
from .network import CompactCnn, backward, forward
from .optim import LrSchedule, adam_step, init_adam, lr_at

LabeledImage = tuple[MultiBandImage, int]


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    lr: float
    train_loss: float
    train_f1: float
    val_f1: float | None = None


@dataclass
class TrainResult:
    net: CompactCnn
    metrics: list[EpochMetrics]
    best_epoch: int | None  # set when a validation set drove checkpoint selection


def predict_logits(net: CompactCnn, images: Sequence[MultiBandImage], batch_size: int = 64) -> np.ndarray:
    """Inference logits for a list of images, batched for memory."""
    outs = []
    for start in range(0, len(images), batch_size):
        x = np.stack([img.data for img in images[start : start + batch_size]])
        outs.append(forward(net, x).logits)
    return np.concatenate(outs, axis=0)


def predict_labels(net: CompactCnn, images: Sequence[MultiBandImage], batch_size: int = 64) -> np.ndarray:
    """Hard class predictions; a logit tie resolves to landslide."""
    logits = predict_logits(net, images, batch_size)
    return (logits[:, LANDSLIDE] >= logits[:, 1 - LANDSLIDE]).astype(np.int64)


def predict_embeddings(net: CompactCnn, images: Sequence[MultiBandImage], batch_size: int = 64) -> np.ndarray:
    outs = []
    for start in range(0, len(images), batch_size):
        x = np.stack([img.data for img in images[start : start + batch_size]])
        outs.append(forward(net, x).embeddings)
    return np.concatenate(outs, axis=0)


def _f1_from_counts(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    return 2.0 * tp / denom if denom else 0.0


def train(
    net: CompactCnn,
    samples: Sequence[LabeledImage],
    policy: AugmentPolicy,
    schedule: LrSchedule,
    epochs: int,
    batch_size: int,
    rng: RngState,
    val_samples: Sequence[LabeledImage] | None = None,
) -> TrainResult:
    """Shuffled mini-batch epochs of augment -> forward -> KL loss -> Adam.

    Train F1 is accumulated from the (augmented) batches against the
    dominant class of each soft target. With a validation set the
    returned network is the best-val-F1 checkpoint, the latest one on
    ties so equally-scoring later epochs keep their better-trained
    embeddings; otherwise it is the final state. Final short batches
    are kept.
    """
    samples = list(samples)
    if not samples:
        raise EmptyDatasetError("training needs at least one sample")
    if epochs < 0:
        raise UsageError(f"epochs must be non-negative, got {epochs}")
    if batch_size < 1:
        raise UsageError(f"batch_size must be positive, got {batch_size}")
    if policy.mixes and batch_size < 2:
        raise UsageError("batch_size must be at least 2 when cutmix/mixup are enabled")

    metrics: list[EpochMetrics] = []
    if epochs == 0:
        return TrainResult(net, metrics, None)

    state = init_adam(net.params)
    n = len(samples)
    best_f1 = -1.0
    best_epoch: int | None = None
    best_params: dict[str, np.ndarray] | None = None

    for epoch in range(epochs):
        r_epoch = rng.child(epoch)
        order = r_epoch.permutation(n)
        lr = lr_at(schedule, epoch)
        loss_sum = 0.0
        tp = fp = fn = 0

        for bi, start in enumerate(range(0, n, batch_size)):
            idx = order[start : start + batch_size]
            batch = [(samples[j][0], SoftLabel.from_hard(samples[j][1])) for j in idx]
            batch = apply_policy(batch, policy, r_epoch.child(bi))
            x = np.stack([img.data for img, _ in batch])
            t = np.stack([lab.p for _, lab in batch])

            res = forward(net, x)
            loss, dlogits = kl_soft_loss(res.logits, t)
            grads = backward(net, res.cache, dlogits)
            adam_step(net.params, grads, state, lr)

            loss_sum += loss * len(batch)
            pred = res.logits[:, LANDSLIDE] >= res.logits[:, 1 - LANDSLIDE]
            truth = t[:, LANDSLIDE] >= t[:, 1 - LANDSLIDE]
            tp += int(np.sum(pred & truth))
            fp += int(np.sum(pred & ~truth))
            fn += int(np.sum(~pred & truth))

        val_f1 = None
        if val_samples:
            vp = predict_labels(net, [img for img, _ in val_samples])
            vt = np.array([lab for _, lab in val_samples])
            val_f1 = _f1_from_counts(
                int(np.sum((vp == 1) & (vt == 1))),
                int(np.sum((vp == 1) & (vt == 0))),
                int(np.sum((vp == 0) & (vt == 1))),
            )
            if val_f1 >= best_f1:
                best_f1 = val_f1
                best_epoch = epoch
                best_params = {k: v.copy() for k, v in net.params.items()}

        metrics.append(
            EpochMetrics(epoch, lr, loss_sum / n, _f1_from_counts(tp, fp, fn), val_f1)
        )

    if best_params is not None:
        net = CompactCnn(net.config, best_params)
    return TrainResult(net, metrics, best_epoch)


def gradient_check(
    net: CompactCnn,
    images: np.ndarray,
    targets: np.ndarray,
    epsilon: float = 1e-5,
) -> float:
    """Max relative error between backprop and central finite differences.

    The network is copied to float64 first so the comparison happens at
    full precision. Intended for tiny nets and batches only.
    """
    net64 = net.astype(np.float64)
    x = np.asarray(images, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)

    res = forward(net64, x)
    _, dlogits = kl_soft_loss(res.logits, t)
    analytic = backward(net64, res.cache, dlogits)

    def loss_at() -> float:
        return kl_soft_loss(forward(net64, x).logits, t)[0]

    worst = 0.0
    for name, p in net64.params.items():
        flat = p.reshape(-1)
        ana = analytic[name].reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + epsilon
            up = loss_at()
            flat[i] = orig - epsilon
            down = loss_at()
            flat[i] = orig
            num = (up - down) / (2.0 * epsilon)
            # denominator floor absorbs the finite-difference noise floor
            # (~1e-11 absolute) so near-zero gradients do not alias as error
            denom = max(abs(ana[i]), abs(num), 1e-6)
            err = abs(ana[i] - num) / denom if (ana[i] != 0.0 or num != 0.0) else 0.0
            worst = max(worst, err)
    return worst
