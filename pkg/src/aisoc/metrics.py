"""Classification metrics and the serialized evaluation report.

Precision and recall use the explicit zero-division convention: a class
with an empty denominator scores 0 and is recorded in the report's
``zero_division_classes`` flag list. ROC AUC is the Mann-Whitney statistic
with ties counted 0.5; PR AUC is average precision with step-wise
interpolation (no trapezoids).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import MetricError


@dataclass
class ClassMetrics:
    name: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class EvalReport:
    setting: str
    split: str
    class_names: list[str]
    per_class: list[ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    confusion: list[list[int]]  # rows = truth, cols = prediction
    roc_auc: float | None = None
    pr_auc: float | None = None
    seeds: list[int] = field(default_factory=list)
    median_seed: int | None = None
    fingerprints: dict = field(default_factory=dict)
    zero_division_classes: list[str] = field(default_factory=list)

    @property
    def total_support(self) -> int:
        return sum(c.support for c in self.per_class)

    def to_json_dict(self) -> dict:
        return {
            "setting": self.setting,
            "split": self.split,
            "classes": [
                {"name": c.name, "precision": c.precision, "recall": c.recall,
                 "f1": c.f1, "support": c.support}
                for c in self.per_class
            ],
            "macro": {"precision": self.macro_precision, "recall": self.macro_recall,
                      "f1": self.macro_f1},
            "auc": (None if self.roc_auc is None
                    else {"roc": self.roc_auc, "pr": self.pr_auc}),
            "confusion": self.confusion,
            "seeds": self.seeds,
            "median_seed": self.median_seed,
            "fingerprints": self.fingerprints,
            "zero_division_classes": self.zero_division_classes,
        }

    def to_json_bytes(self) -> bytes:
        return json.dumps(self.to_json_dict(), sort_keys=True,
                          separators=(",", ":"), allow_nan=False).encode("utf-8")

    def render_table(self) -> str:
        width = max(24, *(len(c.name) for c in self.per_class)) + 2
        header = f"{'Class':<{width}}{'Precision':>10}{'Recall':>8}{'F1':>7}{'Support':>9}"
        lines = [f"[{self.setting} / {self.split}]", header, "-" * len(header)]
        for c in self.per_class:
            lines.append(f"{c.name:<{width}}{c.precision:>10.2f}{c.recall:>8.2f}"
                         f"{c.f1:>7.2f}{c.support:>9d}")
        lines.append("-" * len(header))
        lines.append(f"{'Macro average':<{width}}{self.macro_precision:>10.2f}"
                     f"{self.macro_recall:>8.2f}{self.macro_f1:>7.2f}{'--':>9}")
        if self.roc_auc is not None:
            lines.append(f"ROC AUC {self.roc_auc:.4f}   PR AUC {self.pr_auc:.4f}")
        return "\n".join(lines)


def _class_name(cls) -> str:
    return getattr(cls, "name", None) or getattr(cls, "value", None) or str(cls)


def classification_report(predictions, truth, class_set, setting: str = "",
                          split: str = "", seeds: list[int] | None = None,
                          fingerprints: dict | None = None) -> EvalReport:
    """Per-class and macro precision/recall/F1 plus the confusion matrix."""
    predictions = list(predictions)
    truth = list(truth)
    if len(predictions) != len(truth):
        raise MetricError(f"got {len(predictions)} predictions but {len(truth)} truths")
    class_set = list(class_set)
    index = {c: i for i, c in enumerate(class_set)}
    for value in predictions:
        if value not in index:
            raise MetricError(f"prediction {value!r} not in class set")
    for value in truth:
        if value not in index:
            raise MetricError(f"truth {value!r} not in class set")

    k = len(class_set)
    confusion = [[0] * k for _ in range(k)]
    for pred, true in zip(predictions, truth):
        confusion[index[true]][index[pred]] += 1

    per_class = []
    zero_division = []
    f1_sum = 0.0
    precision_sum = 0.0
    recall_sum = 0.0
    for i, cls in enumerate(class_set):
        tp = confusion[i][i]
        pred_total = sum(confusion[r][i] for r in range(k))
        true_total = sum(confusion[i])
        if pred_total == 0 or true_total == 0:
            zero_division.append(_class_name(cls))
        precision = tp / pred_total if pred_total > 0 else 0.0
        recall = tp / true_total if true_total > 0 else 0.0
        f1 = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        per_class.append(ClassMetrics(name=_class_name(cls), precision=precision,
                                      recall=recall, f1=f1, support=true_total))
        precision_sum += precision
        recall_sum += recall
        f1_sum += f1

    return EvalReport(
        setting=setting, split=split,
        class_names=[_class_name(c) for c in class_set], per_class=per_class,
        macro_precision=precision_sum / k, macro_recall=recall_sum / k,
        macro_f1=f1_sum / k, confusion=confusion,
        seeds=list(seeds or []), fingerprints=dict(fingerprints or {}),
        zero_division_classes=zero_division)


def _check_scores(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=int)
    if s.shape != y.shape or s.ndim != 1:
        raise MetricError(f"scores/labels shape mismatch: {s.shape} vs {y.shape}")
    if not set(np.unique(y)) <= {0, 1}:
        raise MetricError("labels must be binary 0/1")
    if len(set(np.unique(y))) < 2:
        raise MetricError("metric is undefined for single-class labels")
    return s, y


def roc_auc(scores, labels) -> float:
    """Mann-Whitney AUC: P(score_pos > score_neg), ties counted 0.5."""
    s, y = _check_scores(scores, labels)
    order = np.argsort(s, kind="mergesort")
    sorted_scores = s[order]
    ranks = np.empty(len(s))
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    return float((ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def pr_auc(scores, labels) -> float:
    """Average precision: step-wise interpolated area under the PR curve."""
    s, y = _check_scores(scores, labels)
    order = np.argsort(-s, kind="mergesort")
    s_desc = s[order]
    y_desc = y[order]
    n_pos = int(y.sum())
    ap = 0.0
    tp = 0
    fp = 0
    prev_recall = 0.0
    i = 0
    while i < len(s_desc):
        j = i
        while j + 1 < len(s_desc) and s_desc[j + 1] == s_desc[i]:
            j += 1
        tp += int(y_desc[i:j + 1].sum())
        fp += (j - i + 1) - int(y_desc[i:j + 1].sum())
        recall = tp / n_pos
        precision = tp / (tp + fp)
        ap += (recall - prev_recall) * precision
        prev_recall = recall
        i = j + 1
    return float(ap)


def log_loss(probs, labels, eps: float = 1e-12) -> float:
    """Mean negative log-likelihood with probability clipping."""
    p = np.clip(np.asarray(probs, dtype=float), eps, 1.0 - eps)
    y = np.asarray(labels, dtype=float)
    if p.shape != y.shape:
        raise MetricError(f"probs/labels shape mismatch: {p.shape} vs {y.shape}")
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))
