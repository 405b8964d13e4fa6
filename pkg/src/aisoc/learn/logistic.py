"""L2-regularized logistic regression on sparse TF-IDF vectors.

The trainer minimizes mean log-loss plus ``(l2/2) * ||w||^2`` (the bias is
unregularized) by deterministic full-batch gradient descent with an Armijo
backtracking line search, so the loss never increases across accepted steps
and identical inputs always reproduce identical weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from ..errors import DimensionError, TrainingError
from ..features import SparseVector

_ARMIJO_C = 1e-4
_BACKTRACK_FACTOR = 0.5
_MAX_BACKTRACKS = 60
_GRAD_TOL = 1e-9


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    regularization: float
    training_meta: dict = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.weights)

    def to_dict(self) -> dict:
        return {
            "weights": [float(v) for v in self.weights],
            "bias": float(self.bias),
            "regularization": float(self.regularization),
            "training_meta": self.training_meta,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "LogisticModel":
        return cls(weights=np.asarray(payload["weights"], dtype=float),
                   bias=float(payload["bias"]),
                   regularization=float(payload["regularization"]),
                   training_meta=dict(payload["training_meta"]))


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return float(out[0]) if scalar else out


def design_matrix(X: Sequence[SparseVector]) -> sp.csr_matrix:
    """Stack sparse vectors into one CSR matrix, checking dimensions."""
    if not X:
        raise TrainingError("empty design matrix")
    dim = X[0].dim
    if any(x.dim != dim for x in X):
        raise DimensionError("feature vectors have inconsistent dimensions")
    indptr = np.zeros(len(X) + 1, dtype=np.int64)
    np.cumsum([len(x.indices) for x in X], out=indptr[1:])
    indices = np.concatenate([x.indices for x in X]) if len(X) else np.empty(0, np.int64)
    data = np.concatenate([x.values for x in X]) if len(X) else np.empty(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(X), dim))


def loss_and_grad(w: np.ndarray, b: float, X: sp.csr_matrix, y: np.ndarray,
                  l2: float, sample_weight: np.ndarray | None = None
                  ) -> tuple[float, np.ndarray, float]:
    """(Weighted) mean log-loss with L2 penalty, and its gradient in (w, b)."""
    z = X @ w + b
    # log(1 + e^z) - y*z per sample, computed stably.
    per_sample = np.logaddexp(0.0, z) - y * z
    residual = sigmoid(z) - y
    if sample_weight is None:
        n = float(X.shape[0])
        loss = float(np.sum(per_sample)) / n + 0.5 * l2 * float(w @ w)
        grad_w = (X.T @ residual) / n + l2 * w
        grad_b = float(np.sum(residual)) / n
    else:
        total = float(np.sum(sample_weight))
        loss = float(np.sum(sample_weight * per_sample)) / total + 0.5 * l2 * float(w @ w)
        weighted = sample_weight * residual
        grad_w = (X.T @ weighted) / total + l2 * w
        grad_b = float(np.sum(weighted)) / total
    return loss, grad_w, grad_b


def balanced_weights(y: np.ndarray) -> np.ndarray:
    """Inverse-frequency sample weights: each class contributes equal mass."""
    n_pos = float(np.sum(y))
    n_neg = len(y) - n_pos
    return np.where(y == 1, len(y) / (2.0 * n_pos), len(y) / (2.0 * n_neg))


def train_logistic(X: Sequence[SparseVector], y: Sequence[int], l2: float = 1e-3,
                   epochs: int = 500, seed: int = 0,
                   class_weight: str | None = None) -> LogisticModel:
    """Train by full-batch gradient descent with backtracking line search.

    ``class_weight="balanced"`` applies inverse-frequency sample weights,
    useful when the benign class is tiny and its metrics unstable.
    """
    y_arr = np.asarray(y, dtype=float)
    if len(X) != len(y_arr):
        raise TrainingError(f"got {len(X)} vectors but {len(y_arr)} labels")
    if len(X) < 2:
        raise TrainingError("need at least 2 training examples")
    classes = set(np.unique(y_arr))
    if not classes <= {0.0, 1.0}:
        raise TrainingError(f"labels must be binary 0/1, got {sorted(classes)}")
    if len(classes) < 2:
        raise TrainingError("training data contains a single class")
    if l2 < 0:
        raise TrainingError(f"l2 must be >= 0, got {l2}")
    if class_weight not in (None, "balanced"):
        raise TrainingError(f"class_weight must be None or 'balanced', got {class_weight!r}")
    sample_weight = balanced_weights(y_arr) if class_weight == "balanced" else None

    A = design_matrix(X)
    w = np.zeros(A.shape[1])
    b = 0.0
    loss, grad_w, grad_b = loss_and_grad(w, b, A, y_arr, l2, sample_weight)
    initial_loss = loss
    step = 1.0
    iterations = 0
    converged = False
    for _ in range(epochs):
        grad_norm_sq = float(grad_w @ grad_w) + grad_b * grad_b
        if np.sqrt(grad_norm_sq) < _GRAD_TOL:
            converged = True
            break
        accepted = False
        alpha = step
        for _ in range(_MAX_BACKTRACKS):
            w_new = w - alpha * grad_w
            b_new = b - alpha * grad_b
            loss_new, gw_new, gb_new = loss_and_grad(w_new, b_new, A, y_arr, l2,
                                                     sample_weight)
            if loss_new <= loss - _ARMIJO_C * alpha * grad_norm_sq:
                accepted = True
                break
            alpha *= _BACKTRACK_FACTOR
        if not accepted:
            break
        w, b = w_new, b_new
        loss, grad_w, grad_b = loss_new, gw_new, gb_new
        step = min(alpha * 2.0, 1e6)
        iterations += 1

    meta = {
        "iterations": iterations,
        "initial_loss": float(initial_loss),
        "final_loss": float(loss),
        "converged": converged,
        "seed": seed,
        "class_weight": class_weight,
    }
    return LogisticModel(weights=w, bias=b, regularization=l2, training_meta=meta)


def score_logistic(model: LogisticModel, x) -> float:
    """Raw probability sigmoid(w.x + b) for one feature vector."""
    if isinstance(x, SparseVector):
        if x.dim != model.dimension:
            raise DimensionError(f"vector dim {x.dim} != model dim {model.dimension}")
        z = float(model.weights[x.indices] @ x.values) + model.bias
    else:
        arr = np.asarray(x, dtype=float)
        if arr.shape != (model.dimension,):
            raise DimensionError(f"vector dim {arr.shape} != model dim {model.dimension}")
        z = float(model.weights @ arr) + model.bias
    return float(sigmoid(z))
