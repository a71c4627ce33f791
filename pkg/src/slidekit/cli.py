"""Command-line interface.

Subcommands: make-synth, oversample, train, fit-svm, evaluate, crossval,
occlusion, predict, embed. Exit codes: 0 success, 2 usage/config error,
3 data error, 4 numeric failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .augment.smote import SmoteConfig, smote_ssim_detailed
from .config import RunConfig, config_from_dict, config_to_dict, load_config, save_config
from .core.mbt import write_mbt
from .core.normalize import apply_normalization, fit_normalization
from .core.rng import RngState
from .errors import SlidekitError, UsageError
from .evaluation.crossval import cross_validate
from .evaluation.embeddings import export_embeddings
from .evaluation.metrics import confusion, f1
from .evaluation.occlusion import occlusion_importance, write_occlusion_csv, write_occlusion_svg
from .manifest import DatasetManifest, ManifestRow, load_manifest, load_samples, write_manifest
from .model.checkpoint import load_checkpoint, save_checkpoint
from .model.network import CompactCnnConfig, init_compact_cnn
from .model.training import train as train_loop
from .predictor import Predictor
from .svm.head import fit_head, head_predict
from .svm.serialize import load_svm, save_svm
from .svm.smo import SvmConfig
from .synth import make_synth


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated number list, got {text!r}") from exc


def _gamma(text: str):
    return "auto" if text == "auto" else float(text)


def _metrics_lines(metrics) -> list[str]:
    lines = ["epoch,lr,train_loss,train_f1,val_f1"]
    for m in metrics:
        val = "" if m.val_f1 is None else repr(m.val_f1)
        lines.append(f"{m.epoch},{m.lr!r},{m.train_loss!r},{m.train_f1!r},{val}")
    return lines


def _write_lines(path, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def _resolved_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else config_from_dict({})
    updates = {}
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "epochs", None) is not None:
        updates["epochs"] = args.epochs
    if getattr(args, "batch_size", None) is not None:
        updates["batch_size"] = args.batch_size
    if getattr(args, "lr", None) is not None:
        updates["base_lr"] = args.lr
    if getattr(args, "image_size", None) is not None:
        updates["image_size"] = args.image_size
    if getattr(args, "bands", None) is not None:
        updates["band_subset"] = tuple(_int_list(args.bands))
    if getattr(args, "norm", None) is not None:
        updates["norm_mode"] = args.norm
    if getattr(args, "schedule_kind", None) is not None:
        updates["schedule"] = dataclasses.replace(cfg.schedule, kind=args.schedule_kind)
    if updates:
        cfg = dataclasses.replace(cfg, **updates)
    # flags that change lr or epochs retune the schedule they default from
    sched_updates = {}
    if getattr(args, "lr", None) is not None:
        sched_updates["base_lr"] = args.lr
    if getattr(args, "epochs", None) is not None and args.epochs > 0:
        sched_updates["t_max"] = args.epochs
    if sched_updates:
        cfg = dataclasses.replace(cfg, schedule=dataclasses.replace(cfg.schedule, **sched_updates))
    return cfg


def _load_predictor(checkpoint_path, svm_path=None) -> tuple[Predictor, dict]:
    net, stats, meta = load_checkpoint(checkpoint_path)
    svm_model = load_svm(svm_path) if svm_path else None
    return Predictor(net=net, stats=stats, svm_model=svm_model), meta


def _samples_for_model(manifest: DatasetManifest, meta: dict):
    size = meta.get("image_size")
    subset = meta.get("band_subset")
    return load_samples(manifest, size, list(subset) if subset else None)


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_make_synth(args) -> int:
    dead = None if args.dead_band < 0 else args.dead_band
    path = make_synth(
        args.out,
        n_samples=args.samples,
        size=args.size,
        bands=args.bands,
        imbalance=args.imbalance,
        signal_bands=tuple(_int_list(args.signal_bands)),
        dead_band=dead,
        seed=args.seed,
        signal_amplitude=args.amplitude,
    )
    print(f"manifest={path}")
    return 0


def cmd_oversample(args) -> int:
    if args.n_syn < 1:
        raise UsageError(f"--n-syn must be at least 1, got {args.n_syn}")
    manifest = load_manifest(args.manifest)
    ids, images, labels = load_samples(manifest)
    y = np.asarray(labels)
    counts = np.bincount(y, minlength=2)
    # tie goes to landslide: oversampling targets the hazard class
    minority = 1 if counts[1] <= counts[0] else 0
    min_pos = np.flatnonzero(y == minority)

    cfg = SmoteConfig(
        k_neighbors=args.k_neighbors,
        n_syn=args.n_syn,
        clip_lo=args.clip_lo,
        clip_hi=args.clip_hi,
        beta_alpha=args.alpha,
        beta_beta=args.beta,
    )
    records = smote_ssim_detailed([images[i] for i in min_pos], cfg, RngState(args.seed))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    # originals keep absolute paths, synthetics live beside the new manifest
    rows = [
        ManifestRow(id=r.id, path=str(manifest.resolve(r).resolve()), label=r.label, fold=r.fold)
        for r in manifest.rows
    ]
    for i, rec in enumerate(records):
        fname = f"syn_{i:05d}.mbt"
        write_mbt(rec.image, out_dir / fname)
        rows.append(
            ManifestRow(
                id=f"syn_{i:05d}",
                path=fname,
                label=minority,
                anchor=ids[min_pos[rec.anchor]],
                neighbor=ids[min_pos[rec.neighbor]],
                lam=rec.lam,
            )
        )
    out_manifest = out_dir / "manifest.csv"
    write_manifest(rows, out_manifest)
    new_counts = np.bincount([r.label for r in rows], minlength=2)
    print(
        f"synthetics={len(records)} minority_class={minority} "
        f"count_0={new_counts[0]} count_1={new_counts[1]} manifest={out_manifest}"
    )
    return 0


def cmd_train(args) -> int:
    cfg = _resolved_config(args)
    manifest = load_manifest(args.manifest)
    subset = list(cfg.band_subset) if cfg.band_subset else None
    ids, images, labels = load_samples(manifest, cfg.image_size, subset)

    val_ids: set[str] = set()
    if args.val_fold is not None:
        val_ids = {r.id for r in manifest.rows if r.fold == args.val_fold}
        if not val_ids:
            raise UsageError(f"no manifest rows carry fold={args.val_fold}")
    train_samples, val_samples, train_images = [], [], []
    for sid, img, label in zip(ids, images, labels):
        if sid in val_ids:
            val_samples.append((img, label))
        else:
            train_samples.append((img, label))
            train_images.append(img)
    if not train_samples:
        raise UsageError("validation fold swallowed every sample")

    stats = fit_normalization(train_images, cfg.norm_mode)
    train_norm = [(apply_normalization(img, stats), lab) for img, lab in train_samples]
    val_norm = [(apply_normalization(img, stats), lab) for img, lab in val_samples]

    rng = RngState(cfg.seed)
    net = init_compact_cnn(
        CompactCnnConfig(
            in_channels=train_norm[0][0].channels,
            conv_channels=cfg.conv_channels,
            kernel=cfg.kernel,
            embed_dim=cfg.embed_dim,
        ),
        rng.child(1),
    )
    result = train_loop(
        net,
        train_norm,
        cfg.policy,
        cfg.schedule,
        cfg.epochs,
        cfg.batch_size,
        rng.child(2),
        val_samples=val_norm or None,
    )

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    meta = {
        "image_size": cfg.image_size,
        "band_subset": list(cfg.band_subset) if cfg.band_subset else None,
        "seed": cfg.seed,
        "best_epoch": result.best_epoch,
    }
    ckpt_path = out_dir / "model.cnn"
    save_checkpoint(result.net, ckpt_path, stats=stats, meta=meta)
    _write_lines(out_dir / "metrics.csv", _metrics_lines(result.metrics))
    save_config(cfg, out_dir / "config.json")

    for m in result.metrics:
        val = "" if m.val_f1 is None else f" val_f1={m.val_f1:.4f}"
        print(f"epoch={m.epoch} lr={m.lr:.6g} train_loss={m.train_loss:.6f} train_f1={m.train_f1:.4f}{val}")
    print(f"checkpoint={ckpt_path}")
    return 0


def cmd_fit_svm(args) -> int:
    predictor, meta = _load_predictor(args.checkpoint)
    manifest = load_manifest(args.manifest)
    ids, images, labels = _samples_for_model(manifest, meta)
    emb = predictor.embeddings(images)
    y = np.asarray(labels)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = RngState(args.seed)
    for i, c in enumerate(_float_list(args.c)):
        svm_cfg = SvmConfig(c=c, gamma=_gamma(args.gamma), tolerance=args.tolerance, max_passes=args.max_passes)
        model = fit_head(emb, y, svm_cfg, rng.child(i))
        counts = confusion(y, head_predict(model, emb))
        path = out_dir / f"svm_c{c:g}.svm"
        save_svm(model, path)
        print(
            f"c={c:g} train_f1={f1(counts):.4f} n_support={model.support_vectors.shape[0]} path={path}"
        )
    return 0


def cmd_evaluate(args) -> int:
    predictor, meta = _load_predictor(args.checkpoint, args.svm)
    manifest = load_manifest(args.manifest)
    ids, images, labels = _samples_for_model(manifest, meta)
    counts = confusion(np.asarray(labels), predictor.predict(images))
    head = "svm" if args.svm else "fc"
    print(
        f"head={head} tp={counts.tp} fp={counts.fp} fn={counts.fn} tn={counts.tn} f1={f1(counts):.6f}"
    )
    return 0


def cmd_crossval(args) -> int:
    cfg = _resolved_config(args)
    manifest = load_manifest(args.manifest)
    subset = list(cfg.band_subset) if cfg.band_subset else None
    ids, images, labels = load_samples(manifest, cfg.image_size, subset)

    result = cross_validate(
        ids, images, labels, cfg.pipeline_settings(), args.k, RngState(cfg.seed), paper_mode=args.paper_mode
    )

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_config(cfg, out_dir / "config.json")
    meta_base = {
        "image_size": cfg.image_size,
        "band_subset": list(cfg.band_subset) if cfg.band_subset else None,
        "seed": cfg.seed,
    }
    rows = ["fold,best_epoch,fc_f1,svm_f1,fc_tp,fc_fp,fc_fn,fc_tn,svm_tp,svm_fp,svm_fn,svm_tn"]
    for fr in result.folds:
        save_checkpoint(
            fr.net, out_dir / f"fold{fr.fold}.cnn", stats=fr.stats,
            meta={**meta_base, "fold": fr.fold, "best_epoch": fr.best_epoch},
        )
        save_svm(fr.svm_model, out_dir / f"fold{fr.fold}.svm")
        _write_lines(out_dir / f"fold{fr.fold}_epochs.csv", _metrics_lines(fr.metrics))
        c_fc, c_svm = fr.fc_counts, fr.svm_counts
        rows.append(
            f"{fr.fold},{fr.best_epoch},{fr.fc_f1!r},{fr.svm_f1!r},"
            f"{c_fc.tp},{c_fc.fp},{c_fc.fn},{c_fc.tn},{c_svm.tp},{c_svm.fp},{c_svm.fn},{c_svm.tn}"
        )
        print(f"fold={fr.fold} best_epoch={fr.best_epoch} fc_f1={fr.fc_f1:.4f} svm_f1={fr.svm_f1:.4f}")
    _write_lines(out_dir / "metrics.csv", rows)

    syn_rows = ["id,anchor,neighbor,lambda"]
    for fr in result.folds:
        syn_rows += [f"{s.synthetic_id},{s.anchor_id},{s.neighbor_id},{s.lam!r}" for s in fr.synthetics]
    syn_rows += [
        f"{s.synthetic_id},{s.anchor_id},{s.neighbor_id},{s.lam!r}" for s in result.global_synthetics
    ]
    _write_lines(out_dir / "synthetics.csv", syn_rows)

    print(f"mean fc_f1={result.mean_fc_f1:.4f} svm_f1={result.mean_svm_f1:.4f} out={out_dir}")
    return 0


def cmd_occlusion(args) -> int:
    predictor, meta = _load_predictor(args.checkpoint, args.svm)
    manifest = load_manifest(args.manifest)
    ids, images, labels = _samples_for_model(manifest, meta)
    if not args.all_labels:
        images = [img for img, lab in zip(images, labels) if lab == 1]
    names = args.band_names.split(",") if args.band_names else None
    report = occlusion_importance(predictor, images, names)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_occlusion_csv(report, out_dir / "occlusion.csv")
    write_occlusion_svg(report, out_dir / "occlusion.svg")
    for row in report.bands:
        print(f"rank={row.rank} band={row.band} name={row.name} mean_drop={row.mean_drop:.6f}")
    print(f"all_bands_probability={report.all_bands_probability:.6f} out={out_dir}")
    return 0


def cmd_predict(args) -> int:
    predictor, meta = _load_predictor(args.checkpoint, args.svm)
    manifest = load_manifest(args.manifest)
    ids, images, _labels = _samples_for_model(manifest, meta)
    pred = predictor.predict(images)
    _write_lines(args.out, ["id,label"] + [f"{sid},{int(p)}" for sid, p in zip(ids, pred)])
    print(f"predictions={args.out} positive={int(pred.sum())} total={len(pred)}")
    return 0


def cmd_embed(args) -> int:
    predictor, meta = _load_predictor(args.checkpoint)
    manifest = load_manifest(args.manifest)
    ids, images, labels = _samples_for_model(manifest, meta)
    export_embeddings(predictor, ids, images, labels, args.out)
    print(f"embeddings={args.out} rows={len(ids)}")
    return 0


# ---------------------------------------------------------------------------


def _add_common_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int, dest="batch_size")
    p.add_argument("--lr", type=float)
    p.add_argument("--image-size", type=int, dest="image_size")
    p.add_argument("--bands", help="comma-separated band indices to keep")
    p.add_argument("--norm", choices=["standard", "robust"])
    p.add_argument("--schedule-kind", choices=["constant", "step", "cosine_annealing"], dest="schedule_kind")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slidekit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("make-synth", help="generate the synthetic benchmark dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--bands", type=int, default=12)
    p.add_argument("--imbalance", type=float, default=8.0)
    p.add_argument("--signal-bands", default="2,5,9", dest="signal_bands")
    p.add_argument("--dead-band", type=int, default=11, dest="dead_band", help="-1 disables")
    p.add_argument("--amplitude", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_make_synth)

    p = sub.add_parser("oversample", help="offline SMOTE oversampling of the minority class")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n-syn", type=int, required=True, dest="n_syn")
    p.add_argument("--k-neighbors", type=int, default=5, dest="k_neighbors")
    p.add_argument("--clip-lo", type=float, default=0.1, dest="clip_lo")
    p.add_argument("--clip-hi", type=float, default=0.9, dest="clip_hi")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oversample)

    p = sub.add_parser("train", help="train the compact CNN backbone")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--val-fold", type=int, dest="val_fold")
    _add_common_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("fit-svm", help="fit the SVM head on frozen embeddings")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--c", default="1.0", help="C value or comma-separated sweep")
    p.add_argument("--gamma", default="auto")
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.add_argument("--max-passes", type=int, default=10, dest="max_passes")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fit_svm)

    p = sub.add_parser("evaluate", help="confusion counts and F1 on a labeled manifest")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--svm")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("crossval", help="stratified k-fold pipeline evaluation")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--paper-mode", action="store_true", dest="paper_mode",
                   help="apply SMOTE globally before fold assignment")
    _add_common_train_flags(p)
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("occlusion", help="band-wise occlusion importance report")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svm")
    p.add_argument("--band-names", dest="band_names")
    p.add_argument("--all-labels", action="store_true", dest="all_labels",
                   help="use every image, not only landslide-labeled ones")
    p.set_defaults(func=cmd_occlusion)

    p = sub.add_parser("predict", help="write an id,label predictions CSV")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--svm")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("embed", help="export backbone embeddings to CSV")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if not getattr(args, "func", None):
        parser.print_help()
        return 2
    try:
        return int(args.func(args) or 0)
    except SlidekitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
