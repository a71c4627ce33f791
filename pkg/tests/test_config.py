import json

import pytest

from slidekit.config import RunConfig, config_from_dict, config_to_dict, load_config, save_config
from slidekit.errors import UsageError


def test_defaults():
    cfg = config_from_dict({})
    assert cfg.epochs == 50
    assert cfg.batch_size == 36
    assert cfg.base_lr == 3e-4
    assert cfg.image_size == 256
    assert cfg.band_subset is None
    assert cfg.schedule.kind == "cosine_annealing"
    assert cfg.schedule.t_max == 50
    assert cfg.schedule.base_lr == 3e-4
    assert cfg.norm_mode == "standard"
    assert cfg.smote.k_neighbors == 5
    assert cfg.smote.clip_lo == 0.1 and cfg.smote.clip_hi == 0.9


def test_schedule_inherits_top_level_lr_and_epochs():
    cfg = config_from_dict({"epochs": 20, "base_lr": 1e-3})
    assert cfg.schedule.base_lr == 1e-3
    assert cfg.schedule.t_max == 20


def test_explicit_schedule_keys_win():
    cfg = config_from_dict(
        {"epochs": 20, "schedule": {"kind": "step", "base_lr": 5e-4, "t_max": 99}}
    )
    assert cfg.schedule.kind == "step"
    assert cfg.schedule.base_lr == 5e-4
    assert cfg.schedule.t_max == 99


def test_unknown_top_level_key_rejected():
    with pytest.raises(UsageError, match="unknown config keys"):
        config_from_dict({"epochz": 3})


def test_unknown_nested_key_rejected():
    with pytest.raises(UsageError, match="schedule"):
        config_from_dict({"schedule": {"kine": "step"}})
    with pytest.raises(UsageError, match="policy"):
        config_from_dict({"policy": {"hflip": 0.5}})
    with pytest.raises(UsageError, match="smote"):
        config_from_dict({"smote": {"k": 3}})
    with pytest.raises(UsageError, match="svm"):
        config_from_dict({"svm": {"cc": 1.0}})


def test_out_of_range_values_rejected():
    with pytest.raises(UsageError):
        config_from_dict({"epochs": -1})
    with pytest.raises(UsageError):
        config_from_dict({"batch_size": 0})
    with pytest.raises(UsageError):
        config_from_dict({"base_lr": 0.0})
    with pytest.raises(UsageError):
        config_from_dict({"policy": {"cutmix_prob": 0.8, "mixup_prob": 0.8}})
    with pytest.raises(UsageError):
        config_from_dict({"band_subset": []})


def test_band_subset_and_policy():
    cfg = config_from_dict(
        {
            "band_subset": [0, 3, 7],
            "policy": {"hflip_prob": 0.5, "cutmix_prob": 0.2, "mixup_prob": 0.2},
            "svm": {"c": 0.1},
        }
    )
    assert cfg.band_subset == (0, 3, 7)
    assert cfg.policy.cutmix_prob == 0.2
    assert cfg.svm.c == 0.1


def test_round_trip_through_dict():
    cfg = config_from_dict(
        {
            "seed": 7,
            "epochs": 12,
            "image_size": 64,
            "band_subset": [1, 2],
            "policy": {"mixup_prob": 0.3},
            "smote": {"n_syn": 4},
            "svm": {"c": 0.5, "gamma": 0.2},
        }
    )
    again = config_from_dict(config_to_dict(cfg))
    assert again == cfg


def test_file_round_trip(tmp_path):
    cfg = config_from_dict({"epochs": 5, "svm": {"c": 0.75}})
    path = tmp_path / "config.json"
    save_config(cfg, path)
    assert load_config(path) == cfg
    doc = json.loads(path.read_text())
    assert doc["epochs"] == 5


def test_malformed_config_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(UsageError, match="malformed"):
        load_config(path)
    path2 = tmp_path / "list.json"
    path2.write_text("[1,2]")
    with pytest.raises(UsageError, match="JSON object"):
        load_config(path2)
    with pytest.raises(UsageError):
        load_config(tmp_path / "missing.json")


def test_pipeline_settings_mapping():
    cfg = config_from_dict({"epochs": 3, "svm": {"c": 0.1}, "smote": {"n_syn": 2}})
    settings = cfg.pipeline_settings()
    assert settings.epochs == 3
    assert settings.svm.c == 0.1
    assert settings.smote.n_syn == 2
    assert settings.schedule == cfg.schedule
