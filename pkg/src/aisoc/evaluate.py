"""Paired-manifest evaluation: baselines, robustness probes, seed sweeps.

An evaluation item pairs one log record with one malware sample under an
explicit entity id. The three deployment settings score the same manifest:
logs-only (binary at the log threshold), malware-only (binary at the
malware threshold), and fused (3-class triage against the truth derived
from the component labels).
"""

from __future__ import annotations

import hashlib
import json
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .corpus.augment import AugmentOp, augment
from .corpus.records import Label, LogRecord, MalwareSample, Origin, Channel
from .errors import ConfigError, LoadError, MetricError
from .fusion import CalibratedScorePair, TriageLabel, derive_truth_triage, TRIAGE_CLASSES
from .metrics import EvalReport, classification_report, pr_auc, roc_auc
from .seeding import derive_seed
from .service.scorer import Scorer

BINARY_CLASSES = (Label.BENIGN, Label.MALICIOUS)


@dataclass(frozen=True)
class ManifestItem:
    entity_id: str
    log: LogRecord
    malware: MalwareSample

    @property
    def truth(self) -> TriageLabel:
        return derive_truth_triage(self.malware.label, self.log.label)


def build_manifest(logs: Sequence[LogRecord], samples: Sequence[MalwareSample],
                   supports: tuple[int, int, int], seed: int) -> list[ManifestItem]:
    """Pair logs with malware rows to hit the requested triage supports.

    ``supports`` gives the item counts for (NORMAL, SUSPICIOUS,
    HIGH_CONFIDENCE_ATTACK). SUSPICIOUS items alternate between
    malware-driven and log-driven evidence. Pools are cycled
    deterministically when supports exceed the available records.
    """
    n_normal, n_susp, n_high = supports
    if min(supports) < 0 or sum(supports) == 0:
        raise ConfigError(f"invalid manifest supports {supports}")
    pools = {
        (Label.BENIGN, "log"): [r for r in logs if r.label is Label.BENIGN],
        (Label.MALICIOUS, "log"): [r for r in logs if r.label is Label.MALICIOUS],
        (Label.BENIGN, "mw"): [s for s in samples if s.label is Label.BENIGN],
        (Label.MALICIOUS, "mw"): [s for s in samples if s.label is Label.MALICIOUS],
    }
    needs = {
        (Label.BENIGN, "log"): n_normal + (n_susp + 1) // 2,
        (Label.MALICIOUS, "log"): n_high + n_susp // 2,
        (Label.BENIGN, "mw"): n_normal + n_susp // 2,
        (Label.MALICIOUS, "mw"): n_high + (n_susp + 1) // 2,
    }
    for key, needed in needs.items():
        if needed > 0 and not pools[key]:
            raise ConfigError(f"no {key[0].value} {key[1]} records available for manifest")

    cursors = dict.fromkeys(pools, 0)

    def _next(label: Label, kind: str):
        pool = pools[(label, kind)]
        item = pool[cursors[(label, kind)] % len(pool)]
        cursors[(label, kind)] += 1
        return item

    items: list[ManifestItem] = []

    def _add(log_label: Label, mw_label: Label) -> None:
        items.append(ManifestItem(
            entity_id=f"e{len(items):05d}",
            log=_next(log_label, "log"),
            malware=_next(mw_label, "mw")))

    for _ in range(n_normal):
        _add(Label.BENIGN, Label.BENIGN)
    for i in range(n_susp):
        if i % 2 == 0:  # malware-driven
            _add(Label.BENIGN, Label.MALICIOUS)
        else:           # log-driven
            _add(Label.MALICIOUS, Label.BENIGN)
    for _ in range(n_high):
        _add(Label.MALICIOUS, Label.MALICIOUS)
    del seed  # pairing is fully deterministic; seed kept for interface stability
    return items


def write_manifest(items: Sequence[ManifestItem], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for item in items:
            obj = {
                "entity_id": item.entity_id,
                "log_message": item.log.message,
                "log_label": item.log.label.value if item.log.label else None,
                "malware_features": [float(v) for v in item.malware.features],
                "malware_label": item.malware.label.value if item.malware.label else None,
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_manifest(path: str | Path) -> list[ManifestItem]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    items = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            log = LogRecord(timestamp=0, host="manifest", channel=Channel.SYSTEM,
                            message=obj["log_message"],
                            label=Label(obj["log_label"]) if obj.get("log_label") else None,
                            origin=Origin.LOADED)
            malware = MalwareSample(
                sample_id=obj["entity_id"],
                features=tuple(float(v) for v in obj["malware_features"]),
                label=Label(obj["malware_label"]) if obj.get("malware_label") else None)
            items.append(ManifestItem(entity_id=obj["entity_id"], log=log, malware=malware))
        except (KeyError, ValueError) as exc:
            raise LoadError(f"{path}: line {lineno}: {exc}") from exc
    return items


def score_items(scorer: Scorer, items: Sequence[ManifestItem]) -> list[CalibratedScorePair]:
    return [CalibratedScorePair(s_m=scorer.score_malware(item.malware.features),
                                s_l=scorer.score_log(item.log.message),
                                entity_id=item.entity_id)
            for item in items]


def run_baselines(scorer: Scorer, items: Sequence[ManifestItem], split: str = "test",
                  fingerprints: dict | None = None) -> dict[str, EvalReport]:
    """Evaluate logs-only, malware-only, and fused on the same manifest."""
    if not items:
        raise MetricError("cannot evaluate an empty manifest")
    pairs = score_items(scorer, items)
    cfg = scorer.fusion_config
    fingerprints = dict(fingerprints or {})
    fingerprints.setdefault("manifest", manifest_fingerprint(items))
    fingerprints.setdefault("thresholds", f"t_m={cfg.t_m},t_l={cfg.t_l}")

    log_truth = [item.log.label for item in items]
    log_pred = [Label.MALICIOUS if p.s_l >= cfg.t_l else Label.BENIGN for p in pairs]
    logs_report = classification_report(log_pred, log_truth, BINARY_CLASSES,
                                        setting="logs_only", split=split,
                                        fingerprints=fingerprints)
    log_binary = [1 if t is Label.MALICIOUS else 0 for t in log_truth]
    logs_report.roc_auc = roc_auc([p.s_l for p in pairs], log_binary)
    logs_report.pr_auc = pr_auc([p.s_l for p in pairs], log_binary)

    mw_truth = [item.malware.label for item in items]
    mw_pred = [Label.MALICIOUS if p.s_m >= cfg.t_m else Label.BENIGN for p in pairs]
    mw_report = classification_report(mw_pred, mw_truth, BINARY_CLASSES,
                                      setting="malware_only", split=split,
                                      fingerprints=fingerprints)
    mw_binary = [1 if t is Label.MALICIOUS else 0 for t in mw_truth]
    mw_report.roc_auc = roc_auc([p.s_m for p in pairs], mw_binary)
    mw_report.pr_auc = pr_auc([p.s_m for p in pairs], mw_binary)

    fused_pred = [scorer.triage(p.s_m, p.s_l) for p in pairs]
    fused_truth = [item.truth for item in items]
    fused_report = classification_report(fused_pred, fused_truth, TRIAGE_CLASSES,
                                         setting="fused", split=split,
                                         fingerprints=fingerprints)
    return {"logs": logs_report, "malware": mw_report, "fused": fused_report}


def _sub_confusion(report: EvalReport) -> list[list[int]]:
    """NORMAL/SUSPICIOUS 2x2 block of a 3-class triage confusion matrix."""
    c = report.confusion
    return [[c[0][0], c[0][1]], [c[1][0], c[1][1]]]


@dataclass
class RobustnessReport:
    ops: list[str]
    rate: float
    log_macro_f1_before: float
    log_macro_f1_after: float
    fused_macro_f1_before: float
    fused_macro_f1_after: float
    normal_suspicious_confusion_before: list[list[int]]
    normal_suspicious_confusion_after: list[list[int]]
    high_with_stable_malware: int
    high_degraded_to_normal: int
    mutated_items: int

    @property
    def log_macro_f1_delta(self) -> float:
        return self.log_macro_f1_after - self.log_macro_f1_before

    @property
    def fused_macro_f1_delta(self) -> float:
        return self.fused_macro_f1_after - self.fused_macro_f1_before

    def to_json_dict(self) -> dict:
        return {
            "ops": self.ops,
            "rate": self.rate,
            "log_macro_f1": {"before": self.log_macro_f1_before,
                             "after": self.log_macro_f1_after,
                             "delta": self.log_macro_f1_delta},
            "fused_macro_f1": {"before": self.fused_macro_f1_before,
                               "after": self.fused_macro_f1_after,
                               "delta": self.fused_macro_f1_delta},
            "normal_suspicious_confusion": {
                "before": self.normal_suspicious_confusion_before,
                "after": self.normal_suspicious_confusion_after},
            "high_with_stable_malware": self.high_with_stable_malware,
            "high_degraded_to_normal": self.high_degraded_to_normal,
            "mutated_items": self.mutated_items,
        }


def robustness_probe(scorer: Scorer, items: Sequence[ManifestItem],
                     ops: Iterable[AugmentOp], rate: float, seed: int) -> RobustnessReport:
    """Score the manifest before/after adversarial log mutation.

    Only log messages are mutated (replace mode); malware features are
    untouched, so every item's s_m is identical before and after.
    """
    ops = [AugmentOp(op) for op in ops]
    before = run_baselines(scorer, items, split="probe")
    mutated_logs = augment([item.log for item in items], ops, rate,
                           seed=derive_seed(seed, "robustness-probe"), replace=True)
    variants = [ManifestItem(entity_id=item.entity_id, log=log, malware=item.malware)
                for item, log in zip(items, mutated_logs)]
    after = run_baselines(scorer, variants, split="probe-adversarial")

    pairs_before = score_items(scorer, items)
    pairs_after = score_items(scorer, variants)
    high_stable = 0
    degraded_to_normal = 0
    for p_before, p_after in zip(pairs_before, pairs_after):
        if scorer.triage(p_before.s_m, p_before.s_l) is not TriageLabel.HIGH_CONFIDENCE_ATTACK:
            continue
        if p_after.s_m >= scorer.fusion_config.t_m:  # malware evidence unchanged
            high_stable += 1
            if scorer.triage(p_after.s_m, p_after.s_l) is TriageLabel.NORMAL:
                degraded_to_normal += 1

    return RobustnessReport(
        ops=[op.value for op in ops], rate=rate,
        log_macro_f1_before=before["logs"].macro_f1,
        log_macro_f1_after=after["logs"].macro_f1,
        fused_macro_f1_before=before["fused"].macro_f1,
        fused_macro_f1_after=after["fused"].macro_f1,
        normal_suspicious_confusion_before=_sub_confusion(before["fused"]),
        normal_suspicious_confusion_after=_sub_confusion(after["fused"]),
        high_with_stable_malware=high_stable,
        high_degraded_to_normal=degraded_to_normal,
        mutated_items=sum(1 for log in mutated_logs if log.origin is Origin.AUGMENTED))


@dataclass
class MultiSeedReport:
    seeds: list[int]
    macro_f1_per_seed: list[float]
    macro_f1_mean: float
    macro_f1_std: float
    macro_precision_mean: float
    macro_recall_mean: float
    median_seed: int
    median_report: EvalReport

    def to_json_dict(self) -> dict:
        return {
            "seeds": self.seeds,
            "macro_f1_per_seed": self.macro_f1_per_seed,
            "macro_f1_mean": self.macro_f1_mean,
            "macro_f1_std": self.macro_f1_std,
            "macro_precision_mean": self.macro_precision_mean,
            "macro_recall_mean": self.macro_recall_mean,
            "median_seed": self.median_seed,
            "median_report": self.median_report.to_json_dict(),
        }


def multi_seed(run_fn: Callable[[int], EvalReport], seeds: Sequence[int]) -> MultiSeedReport:
    """Run the pipeline per seed; aggregate and attach the median-F1 run.

    With an even number of seeds the lower median is used, so the attached
    report always comes from an actually executed run.
    """
    if not seeds:
        raise ConfigError("multi_seed requires at least one seed")
    reports = [run_fn(seed) for seed in seeds]
    f1s = [r.macro_f1 for r in reports]
    order = sorted(range(len(seeds)), key=lambda i: (f1s[i], i))
    median_idx = order[(len(seeds) - 1) // 2]
    mean = statistics.fmean(f1s)
    std = statistics.pstdev(f1s)
    report = reports[median_idx]
    report.seeds = list(seeds)
    report.median_seed = seeds[median_idx]
    return MultiSeedReport(
        seeds=list(seeds), macro_f1_per_seed=f1s, macro_f1_mean=mean, macro_f1_std=std,
        macro_precision_mean=statistics.fmean(r.macro_precision for r in reports),
        macro_recall_mean=statistics.fmean(r.macro_recall for r in reports),
        median_seed=seeds[median_idx], median_report=report)


def manifest_fingerprint(items: Sequence[ManifestItem]) -> str:
    digest = hashlib.sha256()
    for item in items:
        digest.update(item.entity_id.encode())
        digest.update(item.log.message.encode())
        digest.update(repr(item.malware.features).encode())
        digest.update(str(item.log.label).encode())
        digest.update(str(item.malware.label).encode())
    return f"sha256:{digest.hexdigest()}"
