"""Schema-validated loading and writing of log NDJSON and malware CSV files.

Per-line data problems (malformed JSON, bad field values, non-finite
features) are counted and skipped; structural problems (unreadable file,
missing label column, ragged CSV rows) abort with a ``LoadError`` that
names the offending line.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import LoadError
from .records import Channel, Label, LogRecord, MalwareSample, Origin, parse_label

_LOG_FIELDS = {"timestamp", "host", "channel", "message", "label", "origin"}
_LOG_REQUIRED = {"timestamp", "host", "channel", "message"}


@dataclass
class LogLoadResult:
    records: list[LogRecord] = field(default_factory=list)
    rejected: int = 0
    reject_reasons: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class MalwareLoadResult:
    samples: list[MalwareSample] = field(default_factory=list)
    rejected: int = 0
    reject_reasons: list[tuple[int, str]] = field(default_factory=list)


def _parse_log_line(obj: dict) -> LogRecord:
    if not isinstance(obj, dict):
        raise ValueError("line is not a JSON object")
    unknown = set(obj) - _LOG_FIELDS
    if unknown:
        raise ValueError(f"unknown fields {sorted(unknown)}")
    missing = _LOG_REQUIRED - set(obj)
    if missing:
        raise ValueError(f"missing fields {sorted(missing)}")
    if not isinstance(obj["host"], str) or not isinstance(obj["message"], str):
        raise ValueError("host and message must be strings")
    label = None
    if "label" in obj and obj["label"] is not None:
        label = Label(obj["label"])
    origin = Origin(obj.get("origin", "LOADED"))
    return LogRecord(timestamp=obj["timestamp"], host=obj["host"],
                     channel=Channel(obj["channel"]), message=obj["message"],
                     label=label, origin=origin)


def load_log_ndjson(path: str | Path) -> LogLoadResult:
    """Load log records from an NDJSON file (one object per line)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    result = LogLoadResult()
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            result.records.append(_parse_log_line(json.loads(line)))
        except (json.JSONDecodeError, ValueError) as exc:
            result.rejected += 1
            result.reject_reasons.append((lineno, str(exc)))
    return result


def write_log_ndjson(records: list[LogRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            obj: dict = {
                "timestamp": rec.timestamp,
                "host": rec.host,
                "channel": rec.channel.value,
                "message": rec.message,
            }
            if rec.label is not None:
                obj["label"] = rec.label.value
            obj["origin"] = rec.origin.value
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def load_malware_csv(path: str | Path, label_column: str = "label",
                     id_column: str | None = None) -> MalwareLoadResult:
    """Load malware samples from an RFC-4180 CSV file with a header row."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise LoadError(f"{path}: empty file, expected a header row")
    header = rows[0]
    if label_column not in header:
        raise LoadError(f"{path}: label column {label_column!r} not found in header {header}")
    if id_column is not None and id_column not in header:
        raise LoadError(f"{path}: id column {id_column!r} not found in header {header}")
    label_idx = header.index(label_column)
    id_idx = header.index(id_column) if id_column is not None else None
    feature_idx = [i for i in range(len(header)) if i != label_idx and i != id_idx]

    result = MalwareLoadResult()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise LoadError(
                f"{path}: line {lineno}: expected {len(header)} columns, got {len(row)}")
        try:
            features = tuple(float(row[i]) for i in feature_idx)
            if any(not math.isfinite(v) for v in features):
                raise ValueError("non-finite feature value")
            label = parse_label(row[label_idx])
            sample_id = row[id_idx] if id_idx is not None else f"row{lineno}"
            result.samples.append(
                MalwareSample(sample_id=sample_id, features=features, label=label))
        except ValueError as exc:
            result.rejected += 1
            result.reject_reasons.append((lineno, str(exc)))
    return result


def write_malware_csv(samples: list[MalwareSample], path: str | Path,
                      label_column: str = "label", id_column: str = "sample_id") -> None:
    if samples:
        dim = samples[0].dimension
        if any(s.dimension != dim for s in samples):
            raise LoadError("samples have inconsistent feature dimensionality")
    else:
        dim = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([id_column, *[f"f{i}" for i in range(dim)], label_column])
        for s in samples:
            label = "" if s.label is None else s.label.value
            writer.writerow([s.sample_id, *[repr(v) for v in s.features], label])
