"""End-to-end experiment wiring: generate, train, calibrate, tune, evaluate.

Every stage derives its own RNG stream from the single experiment seed, so
a fixed seed reproduces the whole run byte-for-byte, artifacts included.
``created_at`` on the artifact is pinned to the telemetry epoch for the
same reason; pass your own value if wall-clock stamping matters more than
reproducibility.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from . import calibrate
from .corpus import (
    EPOCH_MS,
    AugmentOp,
    Label,
    LogRecord,
    MalwareSample,
    MalwareScenario,
    ScenarioConfig,
    SplitKind,
    SplitSpec,
    augment,
    dedup_near_identical,
    generate_corpus,
    generate_malware,
    split,
)
from .errors import TrainingError
from .evaluate import ManifestItem, build_manifest, run_baselines
from .features import fit_standardizer, fit_vocabulary, transform_dense, transform_text
from .fusion import (
    CalibratedScorePair,
    FusionConfig,
    derive_truth_triage,
    tune_thresholds,
    tuning_macro_f1,
)
from .learn.forest import score_forest, train_forest
from .learn.logistic import score_logistic, train_logistic
from .metrics import EvalReport, classification_report
from .seeding import derive_seed
from .service.artifact import ModelArtifact, build_artifact
from .service.scorer import Scorer


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs for one full desk-scale run (defaults are test-sized)."""

    seed: int = 7
    # log corpus
    benign_hosts: int = 3
    attack_sessions: int = 12
    duration_s: float = 1800.0
    benign_rate_per_host: float = 0.25
    dedup_threshold: float = 0.9
    log_fractions: tuple[float, float, float] = (0.6, 0.2, 0.2)
    # training-side augmentation
    augment_ops: tuple[str, ...] = ("KEYWORD_OBFUSCATION", "CHAR_NOISE", "SYNONYM_REPLACEMENT")
    augment_rate: float = 0.5
    augment_train: bool = True
    # malware corpus
    malware_benign: int = 300
    malware_malicious: int = 300
    malware_features: int = 8
    malware_separation: float = 3.0
    malware_hard_fraction: float = 0.0
    malware_fractions: tuple[float, float, float] = (0.6, 0.2, 0.2)
    # text features
    min_df: int = 2
    max_features: int = 20_000
    # detectors
    logistic_l2: float = 1e-3
    logistic_epochs: int = 300
    forest_trees: int = 30
    forest_depth: int = 10
    forest_min_leaf: int = 2
    # calibration: "auto" | "platt" | "isotonic"
    calibration: str = "auto"
    # fusion
    grid_step: float = 0.01
    fixed_thresholds: tuple[float, float] | None = None
    # evaluation manifests (NORMAL, SUSPICIOUS, HIGH supports)
    val_supports: tuple[int, int, int] = (20, 40, 40)
    test_supports: tuple[int, int, int] = (14, 76, 62)
    artifact_version_tag: str = "1"


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    artifact: ModelArtifact
    scorer: Scorer
    fusion_config: FusionConfig
    validation_macro_f1: float
    reports: dict[str, EvalReport]
    test_items: list[ManifestItem]
    log_split: object
    malware_split: object
    fingerprints: dict


def corpus_fingerprint(records: list[LogRecord]) -> str:
    digest = hashlib.sha256()
    for r in records:
        digest.update(f"{r.timestamp}|{r.host}|{r.channel.value}|{r.message}|"
                      f"{r.label.value if r.label else ''}".encode("utf-8"))
    return f"sha256:{digest.hexdigest()}"


def malware_fingerprint(samples: list[MalwareSample]) -> str:
    digest = hashlib.sha256()
    for s in samples:
        digest.update(f"{s.sample_id}|{s.features!r}|"
                      f"{s.label.value if s.label else ''}".encode("utf-8"))
    return f"sha256:{digest.hexdigest()}"


def _binary_labels(items, attr: str = "label") -> list[int]:
    return [1 if getattr(x, attr) is Label.MALICIOUS else 0 for x in items]


def train_log_detector(train_records: list[LogRecord], config: ExperimentConfig):
    """Fit vocabulary + logistic model on (possibly augmented) training logs."""
    vocab = fit_vocabulary(train_records, min_df=config.min_df,
                           max_features=config.max_features)
    X = [transform_text(r.message, vocab) for r in train_records]
    y = _binary_labels(train_records)
    model = train_logistic(X, y, l2=config.logistic_l2, epochs=config.logistic_epochs,
                           seed=derive_seed(config.seed, "train-logistic"))
    return vocab, model

def train_malware_detector(train_samples: list[MalwareSample], config: ExperimentConfig):
    """Fit standardizer + random forest on training malware rows."""
    standardizer = fit_standardizer(train_samples)
    X = np.stack([transform_dense(s, standardizer) for s in train_samples])
    y = _binary_labels(train_samples)
    forest = train_forest(X, y, n_trees=config.forest_trees, max_depth=config.forest_depth,
                          min_samples_leaf=config.forest_min_leaf,
                          seed=derive_seed(config.seed, "train-forest"))
    return standardizer, forest


def _calibration_method(config: ExperimentConfig) -> calibrate.CalibrationMethod | None:
    if config.calibration == "auto":
        return None
    return calibrate.CalibrationMethod(config.calibration.upper())


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run generate -> dedup -> split -> train -> calibrate -> tune -> evaluate."""
    # Telemetry.
    logs = generate_corpus(ScenarioConfig(
        benign_hosts=config.benign_hosts, attack_sessions=config.attack_sessions,
        duration_s=config.duration_s, seed=derive_seed(config.seed, "generate-logs"),
        benign_rate_per_host=config.benign_rate_per_host))
    logs = dedup_near_identical(logs, config.dedup_threshold)
    log_split = split(logs, SplitSpec(kind=SplitKind.TIME_ORDERED,
                                      fractions=config.log_fractions))
    train_logs = log_split.train
    if config.augment_train and config.augment_rate > 0:
        train_logs = augment(train_logs, [AugmentOp(op) for op in config.augment_ops],
                             rate=config.augment_rate,
                             seed=derive_seed(config.seed, "augment-train"))

    malware = generate_malware(MalwareScenario(
        benign_samples=config.malware_benign, malicious_samples=config.malware_malicious,
        seed=derive_seed(config.seed, "generate-malware"),
        n_features=config.malware_features, separation=config.malware_separation,
        hard_fraction=config.malware_hard_fraction))
    malware_split = split(malware, SplitSpec(
        kind=SplitKind.STRATIFIED_RANDOM, fractions=config.malware_fractions,
        seed=derive_seed(config.seed, "split-malware")))

    # Detectors.
    vocab, log_model = train_log_detector(train_logs, config)
    standardizer, forest = train_malware_detector(malware_split.train, config)

    # Calibration on the validation splits.
    method = _calibration_method(config)
    raw_log = [score_logistic(log_model, transform_text(r.message, vocab))
               for r in log_split.validation]
    cal_logs = calibrate.fit_calibrator(raw_log, _binary_labels(log_split.validation), method)
    raw_mw = [score_forest(forest, transform_dense(s, standardizer))
              for s in malware_split.validation]
    cal_mw = calibrate.fit_calibrator(raw_mw, _binary_labels(malware_split.validation), method)

    fingerprints = {
        "logs_data": corpus_fingerprint(logs),
        "malware_data": malware_fingerprint(malware),
        "seed": str(config.seed),
    }

    # Threshold selection on a validation manifest.
    preliminary = Scorer(vocabulary=vocab, logistic=log_model, calibrator_logs=cal_logs,
                         standardizer=standardizer, forest=forest,
                         calibrator_malware=cal_mw,
                         fusion_config=FusionConfig(t_m=0.5, t_l=0.5))
    val_items = build_manifest(log_split.validation, malware_split.validation,
                               supports=config.val_supports,
                               seed=derive_seed(config.seed, "manifest-validation"))
    val_pairs = _score_pairs(preliminary, val_items)
    val_truth = [derive_truth_triage(i.malware.label, i.log.label) for i in val_items]
    if config.fixed_thresholds is not None:
        t_m, t_l = config.fixed_thresholds
        fusion_config = FusionConfig(t_m=t_m, t_l=t_l, grid_step=config.grid_step,
                                     tuned_on="fixed", version=config.artifact_version_tag)
    else:
        fusion_config = tune_thresholds(val_pairs, val_truth, grid_step=config.grid_step,
                                        tuned_on="validation",
                                        version=config.artifact_version_tag)
    validation_macro_f1 = tuning_macro_f1(val_pairs, val_truth, fusion_config)

    artifact = build_artifact(vocabulary=vocab, logistic=log_model,
                              calibrator_logs=cal_logs, standardizer=standardizer,
                              forest=forest, calibrator_malware=cal_mw,
                              fusion=fusion_config, fingerprints=fingerprints,
                              created_at=EPOCH_MS)
    scorer = artifact.to_scorer()

    # Final evaluation manifest and the three baseline settings.
    test_items = build_manifest(log_split.test, malware_split.test,
                                supports=config.test_supports,
                                seed=derive_seed(config.seed, "manifest-test"))
    reports = run_baselines(scorer, test_items, split="test", fingerprints=fingerprints)
    return ExperimentResult(config=config, artifact=artifact, scorer=scorer,
                            fusion_config=fusion_config,
                            validation_macro_f1=validation_macro_f1,
                            reports=reports, test_items=test_items,
                            log_split=log_split, malware_split=malware_split,
                            fingerprints=fingerprints)


def _score_pairs(scorer: Scorer, items) -> list[CalibratedScorePair]:
    return [CalibratedScorePair(s_m=scorer.score_malware(i.malware.features),
                                s_l=scorer.score_log(i.log.message),
                                entity_id=i.entity_id)
            for i in items]


@dataclass
class CrossValidationResult:
    fold_macro_f1: list[float] = field(default_factory=list)
    mean_macro_f1: float = 0.0
    reports: list[EvalReport] = field(default_factory=list)


def cross_validate_log_model(records: list[LogRecord], folds: int, seed: int,
                             config: ExperimentConfig | None = None) -> CrossValidationResult:
    """Stratified k-fold CV of the TF-IDF + logistic detector at p >= 0.5."""
    config = config or ExperimentConfig(seed=seed)
    fold_split = split(records, SplitSpec(kind=SplitKind.K_FOLD, folds=folds, seed=seed))
    result = CrossValidationResult()
    for k in range(folds):
        train_records, heldout = fold_split.fold_split(k)
        if len({r.label for r in train_records}) < 2:
            raise TrainingError(f"fold {k} training data is single-class")
        vocab, model = train_log_detector(train_records, config)
        predictions = []
        for record in heldout:
            p = score_logistic(model, transform_text(record.message, vocab))
            predictions.append(Label.MALICIOUS if p >= 0.5 else Label.BENIGN)
        report = classification_report(predictions, [r.label for r in heldout],
                                       (Label.BENIGN, Label.MALICIOUS),
                                       setting="logs_cv", split=f"fold{k}")
        result.reports.append(report)
        result.fold_macro_f1.append(report.macro_f1)
    result.mean_macro_f1 = sum(result.fold_macro_f1) / folds
    return result


def augmented_cv_corpus(config: ExperimentConfig) -> list[LogRecord]:
    """Generate + dedup + augment (all ops) a corpus for cross-validation."""
    logs = generate_corpus(ScenarioConfig(
        benign_hosts=config.benign_hosts, attack_sessions=config.attack_sessions,
        duration_s=config.duration_s, seed=derive_seed(config.seed, "generate-logs"),
        benign_rate_per_host=config.benign_rate_per_host))
    logs = dedup_near_identical(logs, config.dedup_threshold)
    return augment(logs, [AugmentOp(op) for op in config.augment_ops],
                   rate=config.augment_rate, seed=derive_seed(config.seed, "augment-cv"))


# Routine admin activity that shares vocabulary with attack telemetry:
# legitimately benign per the log labels, but suspicious-looking to the
# log detector. Paired with cluster-camouflaged malicious rows these
# produce complementary single-modality errors that the fused rule covers.
SUSPICIOUS_BENIGN_TEMPLATES = (
    "audit: execve /usr/bin/nc -z 10.0.2.14 5432 pid={pid} ppid={ppid} uid=1001",
    "audit: execve /usr/bin/whoami pid={pid} ppid={ppid} uid=1001",
    "audit: execve /bin/cat /etc/passwd pid={pid} ppid={ppid} uid=0",
    "audit: execve /bin/uname -a pid={pid} ppid={ppid} uid=1001",
    "audit: execve /bin/bash /opt/scripts/healthcheck.sh pid={pid} ppid=1 uid=0",
    "audit: execve /usr/bin/id -u pid={pid} ppid={ppid} uid=1001",
)


def complementary_error_manifest(result: ExperimentResult, n_patched: int = 12,
                                 seed: int = 321) -> list[ManifestItem]:
    """Inject complementary single-modality blind spots into the test manifest.

    ``n_patched`` malware-driven SUSPICIOUS items are rewritten so that the
    malicious static-feature row is drawn from inside the benign cluster
    (the malware detector misses it) while the paired benign log line is
    routine admin activity that shares attack vocabulary (the log detector
    flags it). Each single-modality baseline errs on these items; the fused
    triage label stays SUSPICIOUS either way.
    """
    config = result.config
    stealth = generate_malware(MalwareScenario(
        benign_samples=1, malicious_samples=max(1, n_patched), separation=0.0,
        seed=derive_seed(seed, "stealth-malware"), n_features=config.malware_features))
    stealth_rows = [s for s in stealth if s.label is Label.MALICIOUS]
    patched: list[ManifestItem] = []
    k = 0
    for item in result.test_items:
        mw_driven = (item.log.label is Label.BENIGN
                     and item.malware.label is Label.MALICIOUS)
        if mw_driven and k < n_patched:
            message = SUSPICIOUS_BENIGN_TEMPLATES[k % len(SUSPICIOUS_BENIGN_TEMPLATES)].format(
                pid=48200 + k, ppid=48100)
            log = replace(item.log, message=message)
            patched.append(ManifestItem(entity_id=item.entity_id, log=log,
                                        malware=stealth_rows[k % len(stealth_rows)]))
            k += 1
        else:
            patched.append(item)
    return patched


def evaluation_run(config: ExperimentConfig) -> EvalReport:
    """One fused-report pipeline run, for seed sweeps (reseeds the config)."""
    return run_experiment(config).reports["fused"]


def seeded_runner(config: ExperimentConfig):
    """A run function for ``multi_seed``: seed -> fused EvalReport."""
    def _run(seed: int) -> EvalReport:
        return evaluation_run(replace(config, seed=seed))
    return _run
