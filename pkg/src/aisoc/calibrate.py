"""Score calibration: Platt scaling, isotonic regression, method selection.

Platt scaling fits ``P(y=1|s) = sigmoid(a*s + b)`` by deterministic damped
Newton iterations against the smoothed targets ``(N+ + 1)/(N+ + 2)`` and
``1/(N- + 2)``. If the raw scores are anti-oriented (rank AUC < 0.5) they
are negated before fitting and the flip is recorded, which keeps the fitted
slope non-negative; the resulting map is monotone in the oriented score.

Isotonic regression pre-pools tied scores by averaging, runs weighted
pool-adjacent-violators over the score-sorted targets, and stores the fit
as knots. Evaluation interpolates linearly between knots and clamps to the
first/last knot value outside their range, so the output is always a
non-decreasing probability in [0, 1].

``select_method`` picks between the two by 3-fold cross-fit log-loss with
a deterministic score-sorted round-robin fold assignment; ties and small
samples (< 12 points) fall back to Platt, the lower-variance choice.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import CalibrationError

_NEWTON_MAX_ITER = 100
_NEWTON_TOL = 1e-10
_MIN_PLATT_POINTS = 4
_MIN_SELECT_POINTS = 12
# Clip for the selection log-loss only: mild enough that isotonic's hard
# 0/1 edge blocks are penalized, not annihilated, when a held-out point
# lands on the wrong side of them.
_SELECT_CLIP = 1e-3


class CalibrationMethod(str, Enum):
    PLATT = "PLATT"
    ISOTONIC = "ISOTONIC"
    IDENTITY = "IDENTITY"


@dataclass
class Calibrator:
    method: CalibrationMethod
    a: float | None = None
    b: float | None = None
    flipped: bool = False
    knot_scores: np.ndarray | None = None
    knot_values: np.ndarray | None = None
    fit_meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        payload: dict = {"method": self.method.value, "fit_meta": self.fit_meta}
        if self.method is CalibrationMethod.PLATT:
            payload.update(a=float(self.a), b=float(self.b), flipped=self.flipped)
        elif self.method is CalibrationMethod.ISOTONIC:
            payload.update(knot_scores=[float(v) for v in self.knot_scores],
                           knot_values=[float(v) for v in self.knot_values])
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "Calibrator":
        method = CalibrationMethod(payload["method"])
        cal = cls(method=method, fit_meta=dict(payload.get("fit_meta", {})))
        if method is CalibrationMethod.PLATT:
            cal.a = float(payload["a"])
            cal.b = float(payload["b"])
            cal.flipped = bool(payload["flipped"])
        elif method is CalibrationMethod.ISOTONIC:
            cal.knot_scores = np.asarray(payload["knot_scores"], dtype=float)
            cal.knot_values = np.asarray(payload["knot_values"], dtype=float)
        return cal


def identity_calibrator(reason: str = "") -> Calibrator:
    return Calibrator(method=CalibrationMethod.IDENTITY,
                      fit_meta={"reason": reason} if reason else {})


def platt_targets(n_pos: int, n_neg: int) -> tuple[float, float]:
    """Platt's smoothed regression targets for positives and negatives."""
    return (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _check_binary(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=float)
    if s.shape != y.shape or s.ndim != 1:
        raise CalibrationError(f"scores/labels shape mismatch: {s.shape} vs {y.shape}")
    if not set(np.unique(y)) <= {0.0, 1.0}:
        raise CalibrationError("labels must be binary 0/1")
    if len(set(np.unique(y))) < 2:
        raise CalibrationError("calibration requires both classes")
    return s, y


def _rank_auc(scores: np.ndarray, labels: np.ndarray) -> float:
    """Mann-Whitney AUC with ties counted 0.5 (orientation check only)."""
    order = np.argsort(scores, kind="mergesort")
    sorted_scores = scores[order]
    ranks = np.empty(len(scores))
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    return float((ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def fit_platt(scores, labels) -> Calibrator:
    """Fit sigmoid(a*s + b) against Platt's smoothed targets by Newton."""
    s, y = _check_binary(scores, labels)
    if len(s) < _MIN_PLATT_POINTS:
        raise CalibrationError(f"Platt scaling needs >= {_MIN_PLATT_POINTS} points, got {len(s)}")
    if np.ptp(s) == 0.0:
        raise CalibrationError("all scores are equal; no information to calibrate")

    flipped = _rank_auc(s, y) < 0.5
    if flipped:
        s = -s

    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    t_pos, t_neg = platt_targets(n_pos, n_neg)
    t = np.where(y == 1, t_pos, t_neg)

    a = 0.0
    b = float(np.log((n_pos + 1.0) / (n_neg + 1.0)))
    iterations = 0
    for _ in range(_NEWTON_MAX_ITER):
        z = a * s + b
        p = _sigmoid(z)
        grad_a = float(np.sum(s * (p - t)))
        grad_b = float(np.sum(p - t))
        if max(abs(grad_a), abs(grad_b)) < _NEWTON_TOL:
            break
        w = p * (1.0 - p)
        h_aa = float(np.sum(s * s * w)) + 1e-12
        h_ab = float(np.sum(s * w))
        h_bb = float(np.sum(w)) + 1e-12
        det = h_aa * h_bb - h_ab * h_ab
        if det <= 0:
            break
        step_a = (h_bb * grad_a - h_ab * grad_b) / det
        step_b = (h_aa * grad_b - h_ab * grad_a) / det
        # Damped update: halve until the cross-entropy does not increase.
        loss = float(np.sum(np.logaddexp(0.0, z) - t * z))
        scale = 1.0
        for _ in range(40):
            a_new, b_new = a - scale * step_a, b - scale * step_b
            z_new = a_new * s + b_new
            if float(np.sum(np.logaddexp(0.0, z_new) - t * z_new)) <= loss + 1e-12:
                break
            scale *= 0.5
        a, b = a - scale * step_a, b - scale * step_b
        iterations += 1

    if a < 0.0:
        # Orientation-normalized data should not yield a negative slope;
        # clamp to the flat maximum-likelihood fit to keep apply monotone.
        a = 0.0
        mean_t = float(np.mean(t))
        b = float(np.log(mean_t / (1.0 - mean_t)))

    meta = {"validation_size": len(y), "n_pos": n_pos, "n_neg": n_neg,
            "targets": [t_pos, t_neg], "iterations": iterations}
    return Calibrator(method=CalibrationMethod.PLATT, a=float(a), b=float(b),
                      flipped=bool(flipped), fit_meta=meta)


def _pool_ties(scores: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    order = np.argsort(scores, kind="mergesort")
    s, y = scores[order], labels[order]
    uniq, start = np.unique(s, return_index=True)
    boundaries = np.append(start, len(s))
    targets = np.array([y[boundaries[i]:boundaries[i + 1]].mean() for i in range(len(uniq))])
    weights = np.diff(boundaries).astype(float)
    return uniq, targets, weights


def fit_isotonic(scores, labels) -> Calibrator:
    """Weighted pool-adjacent-violators over score-sorted labels."""
    s, y = _check_binary(scores, labels)
    uniq, targets, weights = _pool_ties(s, y)

    # Blocks as (value, weight) pairs; merge while monotonicity is violated.
    values: list[float] = []
    wsum: list[float] = []
    sizes: list[int] = []
    for v, w in zip(targets, weights):
        values.append(float(v))
        wsum.append(float(w))
        sizes.append(1)
        while len(values) > 1 and values[-2] > values[-1]:
            total = wsum[-2] + wsum[-1]
            merged = (values[-2] * wsum[-2] + values[-1] * wsum[-1]) / total
            values[-2:] = [merged]
            wsum[-2:] = [total]
            sizes[-2:] = [sizes[-2] + sizes[-1]]
    fitted = np.repeat(values, sizes)

    n_pos = int(y.sum())
    meta = {"validation_size": len(y), "n_pos": n_pos, "n_neg": len(y) - n_pos,
            "n_knots": len(uniq)}
    return Calibrator(method=CalibrationMethod.ISOTONIC, knot_scores=uniq,
                      knot_values=np.clip(fitted, 0.0, 1.0), fit_meta=meta)


def _cross_fit_loss(s: np.ndarray, y: np.ndarray, method: CalibrationMethod,
                    n_folds: int = 3) -> float:
    order = np.argsort(s, kind="mergesort")
    folds = [order[k::n_folds] for k in range(n_folds)]
    total = 0.0
    count = 0
    for k in range(n_folds):
        test_idx = folds[k]
        train_idx = np.concatenate([folds[j] for j in range(n_folds) if j != k])
        if len(set(y[train_idx])) < 2:
            return float("inf")
        if method is CalibrationMethod.PLATT:
            cal = fit_platt(s[train_idx], y[train_idx])
        else:
            cal = fit_isotonic(s[train_idx], y[train_idx])
        p = np.clip(apply(cal, s[test_idx]), _SELECT_CLIP, 1.0 - _SELECT_CLIP)
        total += float(-np.sum(y[test_idx] * np.log(p) + (1 - y[test_idx]) * np.log(1 - p)))
        count += len(test_idx)
    return total / count


def select_method(scores, labels) -> CalibrationMethod:
    """Pick PLATT or ISOTONIC by 3-fold cross-fit log-loss (ties: PLATT)."""
    s, y = _check_binary(scores, labels)
    if len(s) < _MIN_SELECT_POINTS:
        return CalibrationMethod.PLATT
    try:
        loss_platt = _cross_fit_loss(s, y, CalibrationMethod.PLATT)
    except CalibrationError:
        loss_platt = float("inf")
    try:
        loss_iso = _cross_fit_loss(s, y, CalibrationMethod.ISOTONIC)
    except CalibrationError:
        loss_iso = float("inf")
    if loss_platt == loss_iso == float("inf"):
        return CalibrationMethod.PLATT
    return CalibrationMethod.PLATT if loss_platt <= loss_iso else CalibrationMethod.ISOTONIC


def fit_calibrator(scores, labels, method: CalibrationMethod | None = None) -> Calibrator:
    """Fit the requested (or auto-selected) method, falling back to IDENTITY.

    Degenerate inputs (single class, constant scores) cannot support a
    calibration fit; they produce an IDENTITY calibrator plus a warning
    rather than an error, since raw detector scores are already in [0, 1].
    """
    try:
        if method is None:
            method = select_method(scores, labels)
        if method is CalibrationMethod.IDENTITY:
            return identity_calibrator("requested")
        if method is CalibrationMethod.PLATT:
            return fit_platt(scores, labels)
        return fit_isotonic(scores, labels)
    except CalibrationError as exc:
        warnings.warn(f"calibration fell back to IDENTITY: {exc}", stacklevel=2)
        return identity_calibrator(str(exc))


def apply(calibrator: Calibrator, score):
    """Map raw score(s) through the calibrator; output is always in [0, 1]."""
    arr = np.asarray(score, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if calibrator.method is CalibrationMethod.IDENTITY:
        out = np.clip(arr, 0.0, 1.0)
    elif calibrator.method is CalibrationMethod.PLATT:
        oriented = -arr if calibrator.flipped else arr
        out = _sigmoid(calibrator.a * oriented + calibrator.b)
    else:
        out = np.interp(arr, calibrator.knot_scores, calibrator.knot_values)
    return float(out[0]) if scalar else out
