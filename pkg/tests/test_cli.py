import csv
import json

import numpy as np
import pytest

from slidekit.cli import main
from slidekit.manifest import load_manifest
from slidekit.svm.serialize import load_svm


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    code = main(
        [
            "make-synth", "--out", str(out), "--samples", "36", "--size", "16",
            "--bands", "4", "--imbalance", "3", "--signal-bands", "1",
            "--dead-band", "3", "--seed", "5",
        ]
    )
    assert code == 0
    return out


@pytest.fixture(scope="module")
def trained_dir(synth_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    code = main(
        [
            "train", "--manifest", str(synth_dir / "manifest.csv"), "--out", str(out),
            "--image-size", "16", "--epochs", "12", "--lr", "0.01",
            "--batch-size", "8", "--seed", "3",
        ]
    )
    assert code == 0
    return out


@pytest.fixture(scope="module")
def svm_dir(trained_dir, synth_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("svm")
    code = main(
        [
            "fit-svm", "--checkpoint", str(trained_dir / "model.cnn"),
            "--manifest", str(synth_dir / "manifest.csv"), "--out", str(out),
            "--c", "0.1", "--seed", "2",
        ]
    )
    assert code == 0
    return out


class TestMakeSynth:
    def test_outputs(self, synth_dir):
        manifest = load_manifest(synth_dir / "manifest.csv")
        assert len(manifest.rows) == 36
        labels = np.array(manifest.labels)
        assert labels.sum() == 9  # round(36/4)

    def test_usage_error_exit_code(self, capsys):
        assert main(["make-synth", "--out", "/tmp/x", "--samples", "1"]) == 2
        assert "error:" in capsys.readouterr().err


class TestOversample:
    def test_balances_counts_and_provenance(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "aug"
        code = main(
            [
                "oversample", "--manifest", str(synth_dir / "manifest.csv"),
                "--out", str(out), "--n-syn", "3", "--k-neighbors", "3", "--seed", "1",
            ]
        )
        assert code == 0
        printed = capsys.readouterr().out
        assert "synthetics=27" in printed  # 9 minority * 3
        manifest = load_manifest(out / "manifest.csv")
        labels = np.array(manifest.labels)
        assert (labels == 1).sum() == 36  # 9 + 27
        syn_rows = [r for r in manifest.rows if r.id.startswith("syn_")]
        assert len(syn_rows) == 27
        for row in syn_rows:
            assert row.anchor and row.neighbor
            assert 0.1 <= row.lam <= 0.9

    def test_rerun_same_seed_byte_identical(self, synth_dir, tmp_path):
        args = [
            "oversample", "--manifest", str(synth_dir / "manifest.csv"),
            "--n-syn", "2", "--k-neighbors", "3", "--seed", "7",
        ]
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        for f in sorted(out1.glob("*.mbt")):
            assert f.read_bytes() == (out2 / f.name).read_bytes()

    def test_nsyn_zero_rejected(self, synth_dir, capsys):
        code = main(
            [
                "oversample", "--manifest", str(synth_dir / "manifest.csv"),
                "--out", "/tmp/never", "--n-syn", "0",
            ]
        )
        assert code == 2

    def test_relative_manifest_paths_survive(self, synth_dir, tmp_path, monkeypatch):
        # invoke with a manifest given by a relative path from a different
        # cwd; the augmented manifest must still reference readable files
        monkeypatch.chdir(synth_dir.parent)
        rel = synth_dir.name + "/manifest.csv"
        out = tmp_path / "aug_rel"
        assert main(
            ["oversample", "--manifest", rel, "--out", str(out),
             "--n-syn", "1", "--k-neighbors", "3", "--seed", "2"]
        ) == 0
        monkeypatch.chdir(tmp_path)
        manifest = load_manifest(out / "manifest.csv")
        assert len(manifest.rows) == 45


class TestTrain:
    def test_artifacts(self, trained_dir):
        assert (trained_dir / "model.cnn").is_file()
        metrics = (trained_dir / "metrics.csv").read_text().splitlines()
        assert metrics[0] == "epoch,lr,train_loss,train_f1,val_f1"
        assert len(metrics) == 13  # header + 12 epochs
        config = json.loads((trained_dir / "config.json").read_text())
        assert config["epochs"] == 12 and config["image_size"] == 16

    def test_epochs_zero_initial_checkpoint(self, synth_dir, tmp_path):
        out = tmp_path / "zero"
        code = main(
            [
                "train", "--manifest", str(synth_dir / "manifest.csv"), "--out", str(out),
                "--image-size", "16", "--epochs", "0",
            ]
        )
        assert code == 0
        assert (out / "model.cnn").is_file()
        assert (out / "metrics.csv").read_text() == "epoch,lr,train_loss,train_f1,val_f1\n"

    def test_deterministic_checkpoints(self, synth_dir, tmp_path):
        args = [
            "train", "--manifest", str(synth_dir / "manifest.csv"),
            "--image-size", "16", "--epochs", "2", "--seed", "9",
        ]
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert (out1 / "model.cnn").read_bytes() == (out2 / "model.cnn").read_bytes()
        assert (out1 / "metrics.csv").read_text() == (out2 / "metrics.csv").read_text()

    def test_missing_manifest_is_data_error(self, capsys):
        assert main(["train", "--manifest", "/tmp/gone.csv", "--out", "/tmp/x"]) == 3

    def test_bad_config_is_usage_error(self, synth_dir, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"epochz": 1}')
        code = main(
            [
                "train", "--manifest", str(synth_dir / "manifest.csv"),
                "--out", str(tmp_path / "o"), "--config", str(bad),
            ]
        )
        assert code == 2


class TestFitSvm:
    def test_single_c_model(self, svm_dir, capsys):
        model = load_svm(svm_dir / "svm_c0.1.svm")
        assert model.c == 0.1
        assert model.embed_center is not None

    def test_sweep_emits_model_and_f1_per_value(self, trained_dir, synth_dir, tmp_path, capsys):
        out = tmp_path / "sweep"
        code = main(
            [
                "fit-svm", "--checkpoint", str(trained_dir / "model.cnn"),
                "--manifest", str(synth_dir / "manifest.csv"), "--out", str(out),
                "--c", "1.0,0.75,0.5,0.1",
            ]
        )
        assert code == 0
        lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith("c=")]
        assert len(lines) == 4
        for c in ("1", "0.75", "0.5", "0.1"):
            assert (out / f"svm_c{c}.svm").is_file()
        assert all("train_f1=" in l for l in lines)

    def test_single_class_manifest_is_data_error(self, trained_dir, synth_dir, tmp_path):
        manifest = load_manifest(synth_dir / "manifest.csv")
        rows = [r for r in manifest.rows if r.label == 0]
        path = tmp_path / "single.csv"
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["id", "path", "label"])
            for r in rows:
                w.writerow([r.id, str(manifest.resolve(r)), r.label])
        code = main(
            [
                "fit-svm", "--checkpoint", str(trained_dir / "model.cnn"),
                "--manifest", str(path), "--out", str(tmp_path / "o"),
            ]
        )
        assert code == 3


class TestEvaluatePredict:
    def test_evaluate_prints_counts_and_f1(self, trained_dir, synth_dir, svm_dir, capsys):
        code = main(
            [
                "evaluate", "--checkpoint", str(trained_dir / "model.cnn"),
                "--manifest", str(synth_dir / "manifest.csv"),
                "--svm", str(svm_dir / "svm_c0.1.svm"),
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "tp=" in out and "f1=" in out and "head=svm" in out

    def test_evaluate_empty_manifest_is_data_error(self, trained_dir, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("id,path,label\n")
        code = main(
            ["evaluate", "--checkpoint", str(trained_dir / "model.cnn"), "--manifest", str(path)]
        )
        assert code == 3

    def test_predict_on_training_set_scores_perfectly(
        self, trained_dir, synth_dir, tmp_path, capsys
    ):
        # fit the head at a C loose enough to interpolate the training set
        svm_out = tmp_path / "svm1"
        assert main(
            [
                "fit-svm", "--checkpoint", str(trained_dir / "model.cnn"),
                "--manifest", str(synth_dir / "manifest.csv"), "--out", str(svm_out),
                "--c", "1.0", "--seed", "2",
            ]
        ) == 0
        out_csv = tmp_path / "pred.csv"
        code = main(
            [
                "predict", "--checkpoint", str(trained_dir / "model.cnn"),
                "--manifest", str(synth_dir / "manifest.csv"),
                "--svm", str(svm_out / "svm_c1.svm"), "--out", str(out_csv),
            ]
        )
        assert code == 0
        lines = out_csv.read_text().splitlines()
        assert lines[0] == "id,label"
        assert len(lines) == 37
        manifest = load_manifest(synth_dir / "manifest.csv")
        truth = dict(zip(manifest.ids, manifest.labels))
        pred = {row.split(",")[0]: int(row.split(",")[1]) for row in lines[1:]}
        tp = sum(1 for k in truth if truth[k] == 1 and pred[k] == 1)
        fp = sum(1 for k in truth if truth[k] == 0 and pred[k] == 1)
        fn = sum(1 for k in truth if truth[k] == 1 and pred[k] == 0)
        assert 2 * tp / (2 * tp + fp + fn) == 1.0


class TestOcclusionEmbed:
    def test_occlusion_outputs(self, trained_dir, synth_dir, svm_dir, tmp_path, capsys):
        out = tmp_path / "occ"
        code = main(
            [
                "occlusion", "--checkpoint", str(trained_dir / "model.cnn"),
                "--manifest", str(synth_dir / "manifest.csv"),
                "--svm", str(svm_dir / "svm_c0.1.svm"), "--out", str(out),
                "--band-names", "b0,sig,b2,dead",
            ]
        )
        assert code == 0
        text = (out / "occlusion.csv").read_text()
        assert "sig" in text and "all_bands" in text
        assert (out / "occlusion.svg").read_text().startswith("<svg")
        printed = capsys.readouterr().out
        assert "rank=1" in printed

    def test_embed_csv(self, trained_dir, synth_dir, tmp_path):
        out_csv = tmp_path / "emb.csv"
        code = main(
            [
                "embed", "--checkpoint", str(trained_dir / "model.cnn"),
                "--manifest", str(synth_dir / "manifest.csv"), "--out", str(out_csv),
            ]
        )
        assert code == 0
        lines = out_csv.read_text().splitlines()
        assert len(lines) == 37
        assert lines[0].startswith("id,label,e_0")


class TestCrossval:
    def test_small_crossval_run(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "cv"
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"smote": {"k_neighbors": 3}}')
        code = main(
            [
                "crossval", "--manifest", str(synth_dir / "manifest.csv"), "--out", str(out),
                "--config", str(cfg),
                "--k", "2", "--image-size", "16", "--epochs", "4", "--lr", "0.01",
                "--batch-size", "8", "--seed", "4",
            ]
        )
        assert code == 0
        printed = capsys.readouterr().out
        assert "fold=0" in printed and "fold=1" in printed and "mean" in printed
        assert (out / "fold0.cnn").is_file() and (out / "fold1.svm").is_file()
        metrics = (out / "metrics.csv").read_text().splitlines()
        assert len(metrics) == 3
        assert (out / "synthetics.csv").is_file()

    def test_paper_mode_flag(self, synth_dir, tmp_path):
        out = tmp_path / "cvp"
        code = main(
            [
                "crossval", "--manifest", str(synth_dir / "manifest.csv"), "--out", str(out),
                "--k", "2", "--image-size", "16", "--epochs", "1", "--seed", "4",
                "--paper-mode",
            ]
        )
        assert code == 0
        syn = (out / "synthetics.csv").read_text().splitlines()
        assert len(syn) > 1  # global synthetics recorded


class TestUsage:
    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2

    def test_no_command_prints_help(self, capsys):
        assert main([]) == 2

    def test_missing_required_flag(self):
        assert main(["train", "--out", "/tmp/x"]) == 2

    def test_numeric_failures_exit_4(self, monkeypatch, capsys):
        from slidekit import cli as cli_mod
        from slidekit.errors import NumericError

        def boom(args):
            raise NumericError("diverged")

        monkeypatch.setattr(cli_mod, "cmd_make_synth", boom)
        parser = cli_mod.build_parser()
        args = parser.parse_args(["make-synth", "--out", "/tmp/never"])
        args.func = boom
        monkeypatch.setattr(cli_mod, "build_parser", lambda: parser)
        monkeypatch.setattr(parser, "parse_args", lambda argv=None: args)
        assert cli_mod.main(["make-synth", "--out", "/tmp/never"]) == 4
        assert "diverged" in capsys.readouterr().err
