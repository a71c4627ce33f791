"""Run configuration: JSON document plus command-line overrides.

The JSON schema mirrors RunConfig field names; nested sections
(schedule, policy, smote, svm) mirror their dataclasses. Unknown keys
are rejected everywhere. The schedule's base_lr and t_max default to
the top-level learning rate and epoch count unless given explicitly.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .augment.policy import AugmentPolicy
from .augment.smote import SmoteConfig
from .errors import UsageError
from .evaluation.crossval import PipelineSettings
from .model.optim import LrSchedule
from .svm.smo import SvmConfig


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    image_size: int = 256
    band_subset: tuple[int, ...] | None = None  # None = all bands
    epochs: int = 50
    batch_size: int = 36
    base_lr: float = 3e-4
    schedule: LrSchedule = field(default_factory=lambda: LrSchedule(kind="cosine_annealing"))
    norm_mode: str = "standard"
    policy: AugmentPolicy = field(default_factory=AugmentPolicy)
    smote_enabled: bool = True
    smote: SmoteConfig = field(default_factory=SmoteConfig)
    smote_auto_balance: bool = True
    svm: SvmConfig = field(default_factory=SvmConfig)
    conv_channels: tuple[int, ...] = (16, 32)
    kernel: int = 3
    embed_dim: int = 64

    def __post_init__(self):
        if self.seed < 0:
            raise UsageError(f"seed must be non-negative, got {self.seed}")
        if self.image_size < 1:
            raise UsageError(f"image_size must be positive, got {self.image_size}")
        if self.epochs < 0:
            raise UsageError(f"epochs must be non-negative, got {self.epochs}")
        if self.batch_size < 1:
            raise UsageError(f"batch_size must be positive, got {self.batch_size}")
        if self.base_lr <= 0:
            raise UsageError(f"base_lr must be positive, got {self.base_lr}")
        if self.band_subset is not None:
            if not self.band_subset or any(b < 0 for b in self.band_subset):
                raise UsageError("band_subset must be a non-empty list of band indices")
            object.__setattr__(self, "band_subset", tuple(int(b) for b in self.band_subset))

    def pipeline_settings(self) -> PipelineSettings:
        return PipelineSettings(
            conv_channels=self.conv_channels,
            kernel=self.kernel,
            embed_dim=self.embed_dim,
            epochs=self.epochs,
            batch_size=self.batch_size,
            schedule=self.schedule,
            policy=self.policy,
            norm_mode=self.norm_mode,
            smote_enabled=self.smote_enabled,
            smote=self.smote,
            smote_auto_balance=self.smote_auto_balance,
            svm=self.svm,
        )


def _build(cls, data: dict, where: str):
    allowed = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise UsageError(f"unknown {where} keys: {sorted(unknown)}")
    return cls(**data)


def config_from_dict(doc: dict) -> RunConfig:
    doc = dict(doc)
    top_allowed = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(doc) - top_allowed
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")

    epochs = int(doc.get("epochs", 50))
    base_lr = float(doc.get("base_lr", 3e-4))

    sched = dict(doc.pop("schedule", {}) or {})
    sched.setdefault("kind", "cosine_annealing")
    sched.setdefault("base_lr", base_lr)
    sched.setdefault("t_max", max(1, epochs))
    doc["schedule"] = _build(LrSchedule, sched, "schedule")

    if "policy" in doc:
        pol = dict(doc["policy"] or {})
        if pol.get("rgb_bands") is not None:
            pol["rgb_bands"] = tuple(pol["rgb_bands"])
        doc["policy"] = _build(AugmentPolicy, pol, "policy")
    if "smote" in doc:
        doc["smote"] = _build(SmoteConfig, dict(doc["smote"] or {}), "smote")
    if "svm" in doc:
        doc["svm"] = _build(SvmConfig, dict(doc["svm"] or {}), "svm")
    if doc.get("band_subset") is not None:
        doc["band_subset"] = tuple(doc["band_subset"])
    if "conv_channels" in doc:
        doc["conv_channels"] = tuple(doc["conv_channels"])
    return _build(RunConfig, doc, "config")


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return config_from_dict(doc)


def config_to_dict(cfg: RunConfig) -> dict:
    def plain(obj):
        if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            return {k: plain(v) for k, v in dataclasses.asdict(obj).items()}
        if isinstance(obj, tuple):
            return list(obj)
        return obj

    return {f.name: plain(getattr(cfg, f.name)) for f in dataclasses.fields(RunConfig)}


def save_config(cfg: RunConfig, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(config_to_dict(cfg), f, indent=2, sort_keys=True)
        f.write("\n")
