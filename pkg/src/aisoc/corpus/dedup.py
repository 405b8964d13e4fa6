"""Near-duplicate removal for log corpora.

Two records are near-duplicates when the Jaccard similarity of their
lowercased alphanumeric token sets reaches the threshold and their labels
match; the earliest record of each group is kept. Records with different
labels are never merged.
"""

from __future__ import annotations

import re

from ..errors import ConfigError
from .records import LogRecord

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def message_tokens(message: str) -> frozenset[str]:
    return frozenset(_TOKEN_RE.findall(message.lower()))


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    inter = len(a & b)
    if inter == 0:
        return 0.0
    return inter / (len(a) + len(b) - inter)


def dedup_near_identical(records: list[LogRecord], threshold: float = 0.9) -> list[LogRecord]:
    """Drop near-duplicates, keeping the earliest record of each group."""
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"threshold must be in [0, 1], got {threshold}")
    ordered = sorted(records, key=lambda r: r.timestamp)
    kept: list[LogRecord] = []
    kept_tokens: list[frozenset[str]] = []
    for rec in ordered:
        tokens = message_tokens(rec.message)
        duplicate = any(
            prev.label == rec.label and jaccard(prev_tokens, tokens) >= threshold
            for prev, prev_tokens in zip(kept, kept_tokens)
        )
        if not duplicate:
            kept.append(rec)
            kept_tokens.append(tokens)
    return kept
