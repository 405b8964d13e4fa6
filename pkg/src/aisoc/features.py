"""Feature extraction: TF-IDF text vectors and standardized dense vectors.

Tokenization lowercases the message and splits on whitespace plus Unicode
punctuation/symbol characters, except that ``.``, ``/``, ``-`` and ``:`` are
kept inside tokens so IPs, paths, and command flags survive as single
security-salient terms (trailing occurrences are trimmed; leading ones stay
so flags like ``-i`` survive). Tokens shorter than 2 characters are dropped
and pure integers longer than 4 digits collapse to the placeholder
``<num>``.

IDF uses the smoothed variant ``ln((1 + N) / (1 + df)) + 1`` (always > 0),
TF is the raw in-message count, and every non-empty vector is L2-normalized.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, TrainingError

NUM_TOKEN = "<num>"
DEFAULT_MIN_DF = 2
DEFAULT_MAX_FEATURES = 20_000

_KEEP_CHARS = frozenset("./-:")


@lru_cache(maxsize=4096)
def _is_separator(ch: str) -> bool:
    if ch.isspace():
        return True
    if ch in _KEEP_CHARS:
        return False
    return unicodedata.category(ch)[0] in ("P", "S")


def tokenize(message: str) -> list[str]:
    """Split a log message into normalized tokens."""
    out: list[str] = []
    buf: list[str] = []

    def _flush() -> None:
        tok = "".join(buf).rstrip("./-:")
        buf.clear()
        if len(tok) < 2:
            return
        if len(tok) > 4 and tok.isascii() and tok.isdigit():
            out.append(NUM_TOKEN)
        else:
            out.append(tok)

    for ch in message.lower():
        if _is_separator(ch):
            if buf:
                _flush()
        else:
            buf.append(ch)
    if buf:
        _flush()
    return out


@dataclass
class SparseVector:
    """Sparse feature vector with strictly increasing indices."""

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim)
        dense[self.indices] = self.values
        return dense

    @property
    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.values ** 2)))


@dataclass
class Vocabulary:
    """Fitted TF-IDF vocabulary: dense term indices plus smoothed IDF weights."""

    index: dict[str, int]
    idf: np.ndarray
    document_count: int
    config: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.index)

    def to_dict(self) -> dict:
        terms = sorted(self.index, key=self.index.get)
        return {
            "terms": terms,
            "idf": [float(v) for v in self.idf],
            "document_count": self.document_count,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Vocabulary":
        return cls(index={t: i for i, t in enumerate(payload["terms"])},
                   idf=np.asarray(payload["idf"], dtype=float),
                   document_count=payload["document_count"],
                   config=dict(payload["config"]))


def _messages(corpus: Iterable) -> list[str]:
    return [item if isinstance(item, str) else item.message for item in corpus]


def fit_vocabulary(corpus: Iterable, min_df: int = DEFAULT_MIN_DF,
                   max_features: int | None = DEFAULT_MAX_FEATURES) -> Vocabulary:
    """Fit a vocabulary on the training corpus (records or raw messages)."""
    messages = _messages(corpus)
    if not messages:
        raise TrainingError("cannot fit a vocabulary on an empty corpus")
    df: Counter[str] = Counter()
    for message in messages:
        df.update(set(tokenize(message)))
    terms = [t for t, n in df.items() if n >= min_df]
    if max_features is not None and len(terms) > max_features:
        terms = sorted(terms, key=lambda t: (-df[t], t))[:max_features]
    if not terms:
        raise TrainingError(
            f"vocabulary is empty after min_df={min_df} filtering of {len(messages)} messages")
    terms.sort()
    n_docs = len(messages)
    idf = np.array([np.log((1.0 + n_docs) / (1.0 + df[t])) + 1.0 for t in terms])
    config = {
        "tokenizer": "logtok-v1",
        "tf": "raw-count",
        "idf": "ln((1+N)/(1+df))+1",
        "min_df": min_df,
        "max_features": max_features,
    }
    return Vocabulary(index={t: i for i, t in enumerate(terms)}, idf=idf,
                      document_count=n_docs, config=config)


def transform_text(message: str, vocab: Vocabulary) -> SparseVector:
    """Map a message to an L2-normalized TF-IDF vector (zero if all OOV)."""
    counts = Counter(tokenize(message))
    pairs = sorted((vocab.index[t], n) for t, n in counts.items() if t in vocab.index)
    if not pairs:
        return SparseVector(indices=np.empty(0, dtype=np.int64),
                            values=np.empty(0), dim=vocab.size)
    indices = np.array([i for i, _ in pairs], dtype=np.int64)
    values = np.array([n for _, n in pairs], dtype=float) * vocab.idf[indices]
    values /= np.sqrt(np.sum(values ** 2))
    return SparseVector(indices=indices, values=values, dim=vocab.size)


@dataclass
class Standardizer:
    """Per-feature centering/scaling parameters (population statistics)."""

    mean: np.ndarray
    std: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.mean)

    @property
    def zero_variance(self) -> np.ndarray:
        return self.std == 0.0

    def to_dict(self) -> dict:
        return {"mean": [float(v) for v in self.mean], "std": [float(v) for v in self.std]}

    @classmethod
    def from_dict(cls, payload: dict) -> "Standardizer":
        return cls(mean=np.asarray(payload["mean"], dtype=float),
                   std=np.asarray(payload["std"], dtype=float))


def _feature_matrix(samples: Sequence) -> np.ndarray:
    rows = [s.features if hasattr(s, "features") else s for s in samples]
    return np.asarray(rows, dtype=float)


def fit_standardizer(samples: Sequence) -> Standardizer:
    if len(samples) == 0:
        raise TrainingError("cannot fit a standardizer on an empty sample set")
    X = _feature_matrix(samples)
    return Standardizer(mean=X.mean(axis=0), std=X.std(axis=0))


def transform_dense(sample, params: Standardizer) -> np.ndarray:
    """Standardize one sample; zero-variance features pass through as 0."""
    x = np.asarray(sample.features if hasattr(sample, "features") else sample, dtype=float)
    if x.shape != params.mean.shape:
        raise DimensionError(
            f"sample has {x.shape[0]} features, standardizer expects {params.dimension}")
    out = np.zeros_like(x)
    ok = ~params.zero_variance
    out[ok] = (x[ok] - params.mean[ok]) / params.std[ok]
    return out
