"""Command-line entry points.

Every subcommand reads an optional flat JSON config file (``--config``)
whose keys mirror the long flag names; explicit flags override the file,
which overrides built-in defaults. Artifacts are built up stage by stage:
``train-log`` and ``train-malware`` write PARTIAL artifacts, ``calibrate``
adds the calibrators, and ``tune`` adds the fusion thresholds, after which
the artifact is SERVING-complete.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import calibrate as calibrate_mod
from .corpus import (
    EPOCH_MS,
    AugmentOp,
    Label,
    MalwareScenario,
    ScenarioConfig,
    SplitKind,
    SplitSpec,
    augment,
    generate_corpus,
    generate_malware,
    load_log_ndjson,
    load_malware_csv,
    split,
    write_log_ndjson,
    write_malware_csv,
)
from .errors import AisocError, ConfigError
from .evaluate import build_manifest, read_manifest, robustness_probe, run_baselines, write_manifest
from .features import fit_standardizer, fit_vocabulary, transform_dense, transform_text
from .fusion import CalibratedScorePair, FusionConfig, derive_truth_triage, tune_thresholds, tuning_macro_f1
from .learn.forest import score_forest, train_forest
from .learn.logistic import score_logistic, train_logistic
from .pipeline import corpus_fingerprint, malware_fingerprint
from .seeding import derive_seed
from .service import (
    ModelArtifact,
    Scorer,
    load_artifact,
    save_artifact,
    score_batch,
    serve,
)
from .service.artifact import build_artifact

_DEFAULTS: dict[str, dict] = {
    "generate": {
        "out_logs": None, "out_malware": None, "benign_hosts": 3, "attack_sessions": 12,
        "duration_s": 1800.0, "benign_rate": 0.25, "malware_benign": 300,
        "malware_malicious": 300, "malware_features": 8, "malware_separation": 3.0,
        "malware_hard_fraction": 0.0, "seed": 7,
    },
    "augment": {
        "in_path": None, "out": None, "ops": "KEYWORD_OBFUSCATION,CHAR_NOISE,SYNONYM_REPLACEMENT",
        "rate": 0.5, "replace": False, "seed": 7,
    },
    "split": {
        "logs": None, "malware": None, "out_dir": None, "kind": "TIME_ORDERED",
        "fractions": "0.6,0.2,0.2", "folds": 5, "val_supports": None,
        "test_supports": None, "label_column": "label", "id_column": "sample_id",
        "seed": 7,
    },
    "train-log": {
        "train": None, "artifact": None, "min_df": 2, "max_features": 20000,
        "l2": 1e-3, "epochs": 300, "class_weight": "none", "seed": 7,
    },
    "train-malware": {
        "train": None, "artifact": None, "label_column": "label", "id_column": "sample_id",
        "trees": 100, "max_depth": 12, "min_leaf": 2, "seed": 7,
    },
    "calibrate": {
        "artifact": None, "val_logs": None, "val_malware": None, "method": "auto",
        "label_column": "label", "id_column": "sample_id", "seed": 7,
    },
    "tune": {
        "artifact": None, "manifest": None, "grid_step": 0.01, "version": "1",
        "export_thresholds": None, "seed": 7,
    },
    "evaluate": {
        "artifact": None, "manifest": None, "setting": "all", "json_out": None, "seed": 7,
    },
    "probe": {
        "artifact": None, "manifest": None, "ops": "KEYWORD_OBFUSCATION,CHAR_NOISE",
        "rate": 0.5, "json_out": None, "seed": 7,
    },
    "save": {"artifact": None, "out": None, "created_at": None, "seed": 7},
    "serve": {"artifact": None, "bind": "127.0.0.1:8080", "seed": 7},
    "score-batch": {"artifact": None, "in_path": None, "out": None, "seed": 7},
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aisoc",
        description="Desk-scale AI-SOC toolkit: calibrated detectors fused into triage levels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def _cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat JSON config file; flags override it")
        p.add_argument("--seed", type=int, help="random seed")
        return p

    p = _cmd("generate", "generate synthetic logs and malware features")
    p.add_argument("--out-logs", help="output NDJSON path for log records")
    p.add_argument("--out-malware", help="output CSV path for malware samples")
    p.add_argument("--benign-hosts", type=int)
    p.add_argument("--attack-sessions", type=int)
    p.add_argument("--duration-s", type=float)
    p.add_argument("--benign-rate", type=float)
    p.add_argument("--malware-benign", type=int)
    p.add_argument("--malware-malicious", type=int)
    p.add_argument("--malware-features", type=int)
    p.add_argument("--malware-separation", type=float)
    p.add_argument("--malware-hard-fraction", type=float)

    p = _cmd("augment", "emit adversarial variants of a log file")
    p.add_argument("--in", dest="in_path", help="input NDJSON log file")
    p.add_argument("--out", help="output NDJSON path")
    p.add_argument("--ops", help="comma-separated operator names")
    p.add_argument("--rate", type=float)
    p.add_argument("--replace", action=argparse.BooleanOptionalAction,
                   help="replace mutated records instead of appending variants")

    p = _cmd("split", "split logs/malware and build evaluation manifests")
    p.add_argument("--logs", help="input NDJSON log file")
    p.add_argument("--malware", help="input malware CSV")
    p.add_argument("--out-dir", help="directory for split files")
    p.add_argument("--kind", choices=[k.value for k in SplitKind])
    p.add_argument("--fractions", help="train,validation,test e.g. 0.6,0.2,0.2")
    p.add_argument("--folds", type=int)
    p.add_argument("--val-supports", help="NORMAL,SUSPICIOUS,HIGH manifest supports")
    p.add_argument("--test-supports", help="NORMAL,SUSPICIOUS,HIGH manifest supports")
    p.add_argument("--label-column")
    p.add_argument("--id-column", help="id column name; empty string if absent")

    p = _cmd("train-log", "fit vocabulary + logistic model on training logs")
    p.add_argument("--train", help="training NDJSON log file")
    p.add_argument("--artifact", help="artifact path to create or update")
    p.add_argument("--min-df", type=int)
    p.add_argument("--max-features", type=int)
    p.add_argument("--l2", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--class-weight", choices=["none", "balanced"])

    p = _cmd("train-malware", "fit standardizer + random forest on training rows")
    p.add_argument("--train", help="training malware CSV")
    p.add_argument("--artifact", help="artifact path to create or update")
    p.add_argument("--label-column")
    p.add_argument("--id-column")
    p.add_argument("--trees", type=int)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--min-leaf", type=int)

    p = _cmd("calibrate", "fit per-model calibrators on the validation split")
    p.add_argument("--artifact")
    p.add_argument("--val-logs", help="validation NDJSON log file")
    p.add_argument("--val-malware", help="validation malware CSV")
    p.add_argument("--method", choices=["auto", "platt", "isotonic", "identity"])
    p.add_argument("--label-column")
    p.add_argument("--id-column")

    p = _cmd("tune", "grid-search fusion thresholds on a validation manifest")
    p.add_argument("--artifact")
    p.add_argument("--manifest", help="validation manifest NDJSON")
    p.add_argument("--grid-step", type=float)
    p.add_argument("--version", help="version tag recorded in the fusion config")
    p.add_argument("--export-thresholds", help="also write thresholds to this JSON file")

    p = _cmd("evaluate", "run a baseline setting on a test manifest")
    p.add_argument("--artifact")
    p.add_argument("--manifest")
    p.add_argument("--setting", choices=["logs", "malware", "fused", "all"])
    p.add_argument("--json-out", help="write the report JSON here (default: stdout)")

    p = _cmd("probe", "robustness probe: score a manifest before/after mutation")
    p.add_argument("--artifact")
    p.add_argument("--manifest")
    p.add_argument("--ops")
    p.add_argument("--rate", type=float)
    p.add_argument("--json-out")

    p = _cmd("save", "verify and re-write an artifact canonically")
    p.add_argument("--artifact")
    p.add_argument("--out")
    p.add_argument("--created-at", type=int, help="epoch ms stamp (defaults to original)")

    p = _cmd("serve", "serve scoring over HTTP")
    p.add_argument("--artifact")
    p.add_argument("--bind", help="host:port")

    p = _cmd("score-batch", "score an NDJSON request file offline")
    p.add_argument("--artifact")
    p.add_argument("--in", dest="in_path", help="input request NDJSON")
    p.add_argument("--out", help="output result NDJSON (default: stdout)")
    return parser


def _merge_options(args: argparse.Namespace) -> dict:
    defaults = dict(_DEFAULTS[args.command])
    if args.config:
        try:
            file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError(f"{args.config}: config must be a flat JSON object")
        for key, value in file_cfg.items():
            norm = key.replace("-", "_")
            if norm == "in":
                norm = "in_path"
            if norm not in defaults:
                raise ConfigError(f"{args.config}: unknown option {key!r} for {args.command}")
            defaults[norm] = value
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            defaults[key] = value
    return defaults


def _require(opts: dict, *names: str) -> None:
    missing = [n for n in names if opts.get(n) in (None, "")]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-").replace("in-path", "in") for n in missing)
        raise ConfigError(f"missing required option(s): {flags}")


def _triplet(value, kind=float) -> tuple:
    if isinstance(value, str):
        parts = [kind(v) for v in value.split(",")]
    else:
        parts = [kind(v) for v in value]
    if len(parts) != 3:
        raise ConfigError(f"expected three comma-separated values, got {value!r}")
    return tuple(parts)


def _ops(value) -> list[AugmentOp]:
    names = value.split(",") if isinstance(value, str) else list(value)
    try:
        return [AugmentOp(name.strip().upper()) for name in names if name.strip()]
    except ValueError as exc:
        raise ConfigError(f"unknown augmentation op in {value!r}") from exc


def _load_or_new_artifact(path: str) -> ModelArtifact:
    if Path(path).exists():
        return load_artifact(path)
    return build_artifact(created_at=EPOCH_MS)


def _binary(items) -> list[int]:
    return [1 if item.label is Label.MALICIOUS else 0 for item in items]


def _cmd_generate(opts: dict) -> int:
    _require(opts, "out_logs", "out_malware")
    seed = opts["seed"]
    logs = generate_corpus(ScenarioConfig(
        benign_hosts=opts["benign_hosts"], attack_sessions=opts["attack_sessions"],
        duration_s=opts["duration_s"], seed=derive_seed(seed, "generate-logs"),
        benign_rate_per_host=opts["benign_rate"]))
    write_log_ndjson(logs, opts["out_logs"])
    samples = generate_malware(MalwareScenario(
        benign_samples=opts["malware_benign"], malicious_samples=opts["malware_malicious"],
        seed=derive_seed(seed, "generate-malware"), n_features=opts["malware_features"],
        separation=opts["malware_separation"], hard_fraction=opts["malware_hard_fraction"]))
    write_malware_csv(samples, opts["out_malware"])
    print(f"wrote {len(logs)} log records to {opts['out_logs']}")
    print(f"wrote {len(samples)} malware samples to {opts['out_malware']}")
    return 0


def _cmd_augment(opts: dict) -> int:
    _require(opts, "in_path", "out")
    loaded = load_log_ndjson(opts["in_path"])
    if loaded.rejected:
        print(f"skipped {loaded.rejected} malformed input line(s)", file=sys.stderr)
    out = augment(loaded.records, _ops(opts["ops"]), rate=opts["rate"],
                  seed=opts["seed"], replace=bool(opts["replace"]))
    write_log_ndjson(out, opts["out"])
    n_variants = sum(1 for r in out if r.origin.value == "AUGMENTED")
    print(f"wrote {len(out)} records ({n_variants} augmented) to {opts['out']}")
    return 0


def _auto_supports(logs_split, malware_split) -> tuple[int, int, int]:
    nb = min(sum(1 for r in logs_split if r.label is Label.BENIGN),
             sum(1 for s in malware_split if s.label is Label.BENIGN))
    nm = min(sum(1 for r in logs_split if r.label is Label.MALICIOUS),
             sum(1 for s in malware_split if s.label is Label.MALICIOUS))
    return (max(1, nb // 2), max(2, (nb + nm) // 2), max(1, nm // 2))


def _cmd_split(opts: dict) -> int:
    _require(opts, "logs", "out_dir")
    out_dir = Path(opts["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    loaded = load_log_ndjson(opts["logs"])
    if loaded.rejected:
        print(f"skipped {loaded.rejected} malformed log line(s)", file=sys.stderr)
    kind = SplitKind(opts["kind"])
    spec = SplitSpec(kind=kind, fractions=_triplet(opts["fractions"]),
                     folds=opts["folds"] if kind is SplitKind.K_FOLD else 0,
                     seed=opts["seed"])
    log_split = split(loaded.records, spec)
    if kind is SplitKind.K_FOLD:
        for i, fold in enumerate(log_split.folds):
            write_log_ndjson(fold, out_dir / f"logs_fold{i}.ndjson")
        print(f"wrote {len(log_split.folds)} log folds to {out_dir}")
        return 0
    for name in ("train", "validation", "test"):
        write_log_ndjson(getattr(log_split, name), out_dir / f"logs_{name}.ndjson")
    print(f"wrote log splits {[len(log_split.train), len(log_split.validation), len(log_split.test)]} to {out_dir}")
    if not opts["malware"]:
        return 0
    mal = load_malware_csv(opts["malware"], label_column=opts["label_column"],
                           id_column=opts["id_column"] or None)
    if mal.rejected:
        print(f"skipped {mal.rejected} malformed malware row(s)", file=sys.stderr)
    mal_split = split(mal.samples, SplitSpec(
        kind=SplitKind.STRATIFIED_RANDOM, fractions=_triplet(opts["fractions"]),
        seed=derive_seed(opts["seed"], "split-malware")))
    for name in ("train", "validation", "test"):
        write_malware_csv(getattr(mal_split, name), out_dir / f"malware_{name}.csv")
    for name, flag in (("validation", "val_supports"), ("test", "test_supports")):
        logs_part = getattr(log_split, name)
        mal_part = getattr(mal_split, name)
        supports = (_triplet(opts[flag], int) if opts[flag]
                    else _auto_supports(logs_part, mal_part))
        items = build_manifest(logs_part, mal_part, supports=supports,
                               seed=derive_seed(opts["seed"], f"manifest-{name}"))
        write_manifest(items, out_dir / f"manifest_{name}.ndjson")
        print(f"wrote manifest_{name}.ndjson with supports {supports}")
    return 0


def _cmd_train_log(opts: dict) -> int:
    _require(opts, "train", "artifact")
    loaded = load_log_ndjson(opts["train"])
    if loaded.rejected:
        print(f"skipped {loaded.rejected} malformed line(s)", file=sys.stderr)
    vocab = fit_vocabulary(loaded.records, min_df=opts["min_df"],
                           max_features=opts["max_features"])
    X = [transform_text(r.message, vocab) for r in loaded.records]
    class_weight = None if opts["class_weight"] in (None, "none") else opts["class_weight"]
    model = train_logistic(X, _binary(loaded.records), l2=opts["l2"],
                           epochs=opts["epochs"], seed=opts["seed"],
                           class_weight=class_weight)
    artifact = _load_or_new_artifact(opts["artifact"])
    artifact.vocabulary = vocab
    artifact.logistic = model
    artifact.fingerprints["logs_data"] = corpus_fingerprint(loaded.records)
    artifact.fingerprints["logs_seed"] = str(opts["seed"])
    checksum = save_artifact(artifact, opts["artifact"])
    print(f"trained log model on {len(X)} records (vocab {vocab.size}); "
          f"artifact {artifact.status} {checksum[:19]}")
    return 0


def _cmd_train_malware(opts: dict) -> int:
    _require(opts, "train", "artifact")
    loaded = load_malware_csv(opts["train"], label_column=opts["label_column"],
                              id_column=opts["id_column"] or None)
    if loaded.rejected:
        print(f"skipped {loaded.rejected} malformed row(s)", file=sys.stderr)
    standardizer = fit_standardizer(loaded.samples)
    X = np.stack([transform_dense(s, standardizer) for s in loaded.samples])
    forest = train_forest(X, _binary(loaded.samples), n_trees=opts["trees"],
                          max_depth=opts["max_depth"], min_samples_leaf=opts["min_leaf"],
                          seed=opts["seed"])
    artifact = _load_or_new_artifact(opts["artifact"])
    artifact.standardizer = standardizer
    artifact.forest = forest
    artifact.fingerprints["malware_data"] = malware_fingerprint(loaded.samples)
    artifact.fingerprints["malware_seed"] = str(opts["seed"])
    checksum = save_artifact(artifact, opts["artifact"])
    print(f"trained malware model on {len(X)} samples; artifact {artifact.status} {checksum[:19]}")
    return 0


def _cmd_calibrate(opts: dict) -> int:
    _require(opts, "artifact", "val_logs", "val_malware")
    artifact = load_artifact(opts["artifact"])
    for component in ("vocabulary", "logistic", "standardizer", "forest"):
        if getattr(artifact, component) is None:
            raise ConfigError(f"artifact is missing {component}; train both models first")
    method = None if opts["method"] == "auto" else calibrate_mod.CalibrationMethod(
        opts["method"].upper())
    logs = load_log_ndjson(opts["val_logs"]).records
    raw_l = [score_logistic(artifact.logistic, transform_text(r.message, artifact.vocabulary))
             for r in logs]
    artifact.calibrator_logs = calibrate_mod.fit_calibrator(raw_l, _binary(logs), method)
    samples = load_malware_csv(opts["val_malware"], label_column=opts["label_column"],
                               id_column=opts["id_column"] or None).samples
    raw_m = [score_forest(artifact.forest, transform_dense(s, artifact.standardizer))
             for s in samples]
    artifact.calibrator_malware = calibrate_mod.fit_calibrator(raw_m, _binary(samples), method)
    checksum = save_artifact(artifact, opts["artifact"])
    print(f"calibrators: logs={artifact.calibrator_logs.method.value} "
          f"malware={artifact.calibrator_malware.method.value}; "
          f"artifact {artifact.status} {checksum[:19]}")
    return 0


def _pre_tune_scorer(artifact: ModelArtifact) -> Scorer:
    """Scorer over a calibrated-but-untuned artifact (placeholder thresholds)."""
    for component in ("vocabulary", "logistic", "standardizer", "forest",
                      "calibrator_logs", "calibrator_malware"):
        if getattr(artifact, component) is None:
            raise ConfigError(f"artifact is missing {component}")
    return Scorer(vocabulary=artifact.vocabulary, logistic=artifact.logistic,
                  calibrator_logs=artifact.calibrator_logs,
                  standardizer=artifact.standardizer, forest=artifact.forest,
                  calibrator_malware=artifact.calibrator_malware,
                  fusion_config=artifact.fusion or FusionConfig(t_m=0.5, t_l=0.5),
                  artifact_version=artifact.version)


def _scored_pairs(artifact: ModelArtifact, items) -> list[CalibratedScorePair]:
    scorer = _pre_tune_scorer(artifact)
    return [CalibratedScorePair(s_m=scorer.score_malware(i.malware.features),
                                s_l=scorer.score_log(i.log.message), entity_id=i.entity_id)
            for i in items]


def _cmd_tune(opts: dict) -> int:
    _require(opts, "artifact", "manifest")
    artifact = load_artifact(opts["artifact"])
    items = read_manifest(opts["manifest"])
    pairs = _scored_pairs(artifact, items)
    truth = [derive_truth_triage(i.malware.label, i.log.label) for i in items]
    config = tune_thresholds(pairs, truth, grid_step=opts["grid_step"],
                             tuned_on=str(opts["manifest"]), version=opts["version"])
    macro = tuning_macro_f1(pairs, truth, config)
    artifact.fusion = config
    checksum = save_artifact(artifact, opts["artifact"])
    print(f"selected thresholds t_m={config.t_m:.2f} t_l={config.t_l:.2f} "
          f"(validation macro-F1 {macro:.4f}); artifact {artifact.status} {checksum[:19]}")
    if opts["export_thresholds"]:
        Path(opts["export_thresholds"]).write_text(
            json.dumps(config.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
        print(f"exported thresholds to {opts['export_thresholds']}")
    return 0


def _cmd_evaluate(opts: dict) -> int:
    _require(opts, "artifact", "manifest")
    artifact = load_artifact(opts["artifact"])
    items = read_manifest(opts["manifest"])
    reports = run_baselines(artifact.to_scorer(), items, split=str(opts["manifest"]),
                            fingerprints=dict(artifact.fingerprints))
    selected = {"logs": ["logs"], "malware": ["malware"], "fused": ["fused"],
                "all": ["logs", "malware", "fused"]}[opts["setting"]]
    payload = {name: reports[name].to_json_dict() for name in selected}
    for name in selected:
        print(reports[name].render_table())
        print()
    text = json.dumps(payload if len(selected) > 1 else payload[selected[0]],
                      sort_keys=True, indent=2)
    if opts["json_out"]:
        Path(opts["json_out"]).write_text(text + "\n", encoding="utf-8")
        print(f"wrote report JSON to {opts['json_out']}")
    else:
        print(text)
    return 0


def _cmd_probe(opts: dict) -> int:
    _require(opts, "artifact", "manifest")
    artifact = load_artifact(opts["artifact"])
    items = read_manifest(opts["manifest"])
    report = robustness_probe(artifact.to_scorer(), items, _ops(opts["ops"]),
                              rate=opts["rate"], seed=opts["seed"])
    print(f"log macro-F1   {report.log_macro_f1_before:.4f} -> {report.log_macro_f1_after:.4f} "
          f"(delta {report.log_macro_f1_delta:+.4f})")
    print(f"fused macro-F1 {report.fused_macro_f1_before:.4f} -> {report.fused_macro_f1_after:.4f} "
          f"(delta {report.fused_macro_f1_delta:+.4f})")
    print(f"HIGH items with stable malware evidence degraded to NORMAL: "
          f"{report.high_degraded_to_normal}/{report.high_with_stable_malware}")
    text = json.dumps(report.to_json_dict(), sort_keys=True, indent=2)
    if opts["json_out"]:
        Path(opts["json_out"]).write_text(text + "\n", encoding="utf-8")
        print(f"wrote probe JSON to {opts['json_out']}")
    else:
        print(text)
    return 0


def _cmd_save(opts: dict) -> int:
    _require(opts, "artifact", "out")
    artifact = load_artifact(opts["artifact"])
    if opts["created_at"] is not None:
        artifact.created_at = int(opts["created_at"])
    checksum = save_artifact(artifact, opts["out"])
    print(f"saved {artifact.status} artifact to {opts['out']} ({checksum[:19]})")
    return 0


def _cmd_serve(opts: dict) -> int:
    _require(opts, "artifact", "bind")
    artifact = load_artifact(opts["artifact"])
    host, _, port = str(opts["bind"]).rpartition(":")
    if not host:
        raise ConfigError(f"--bind must be host:port, got {opts['bind']!r}")
    service = serve(artifact, (host, int(port)))
    print(f"serving artifact {artifact.version} on {service.url}", flush=True)
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        service.shutdown()
    return 0


def _cmd_score_batch(opts: dict) -> int:
    _require(opts, "artifact", "in_path")
    artifact = load_artifact(opts["artifact"])
    results = score_batch(artifact.to_scorer(), opts["in_path"], opts["out"])
    if opts["out"]:
        print(f"scored {len(results)} request(s) into {opts['out']}")
    else:
        for obj in results:
            print(json.dumps(obj, ensure_ascii=False))
    return 0


_HANDLERS = {
    "generate": _cmd_generate,
    "augment": _cmd_augment,
    "split": _cmd_split,
    "train-log": _cmd_train_log,
    "train-malware": _cmd_train_malware,
    "calibrate": _cmd_calibrate,
    "tune": _cmd_tune,
    "evaluate": _cmd_evaluate,
    "probe": _cmd_probe,
    "save": _cmd_save,
    "serve": _cmd_serve,
    "score-batch": _cmd_score_batch,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _merge_options(args)
        return _HANDLERS[args.command](opts)
    except AisocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
