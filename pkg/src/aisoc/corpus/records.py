"""Domain records for host telemetry and malware static-feature tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class Channel(str, Enum):
    AUTH = "AUTH"
    PROCESS = "PROCESS"
    SYSTEM = "SYSTEM"


class Label(str, Enum):
    BENIGN = "BENIGN"
    MALICIOUS = "MALICIOUS"


class Origin(str, Enum):
    GENERATED = "GENERATED"
    LOADED = "LOADED"
    AUGMENTED = "AUGMENTED"


@dataclass(frozen=True)
class LogRecord:
    """One timestamped host log line.

    ``timestamp`` is epoch milliseconds. ``label`` is ``None`` for unlabeled
    lines; labeled lines must carry a non-empty message.
    """

    timestamp: int
    host: str
    channel: Channel
    message: str
    label: Label | None = None
    origin: Origin = Origin.GENERATED

    def __post_init__(self) -> None:
        if not isinstance(self.timestamp, int) or isinstance(self.timestamp, bool):
            raise ValueError(f"timestamp must be an integer, got {self.timestamp!r}")
        if self.timestamp < 0:
            raise ValueError(f"timestamp must be >= 0, got {self.timestamp}")
        if not isinstance(self.channel, Channel):
            raise ValueError(f"channel must be a Channel, got {self.channel!r}")
        if self.label is not None and not isinstance(self.label, Label):
            raise ValueError(f"label must be a Label or None, got {self.label!r}")
        if not isinstance(self.origin, Origin):
            raise ValueError(f"origin must be an Origin, got {self.origin!r}")
        if self.label is not None and not self.message.strip():
            raise ValueError("labeled records must have a non-empty message")


@dataclass(frozen=True)
class MalwareSample:
    """One malware-table row: a dense static-feature vector plus a label."""

    sample_id: str
    features: tuple[float, ...] = field(default_factory=tuple)
    label: Label | None = None

    def __post_init__(self) -> None:
        if self.label is not None and not isinstance(self.label, Label):
            raise ValueError(f"label must be a Label or None, got {self.label!r}")
        for v in self.features:
            if not math.isfinite(v):
                raise ValueError(f"sample {self.sample_id!r} has non-finite feature {v!r}")

    @property
    def dimension(self) -> int:
        return len(self.features)


def parse_label(value: str) -> Label | None:
    """Map a textual label cell to a Label; empty string means unlabeled."""
    text = value.strip()
    if not text:
        return None
    upper = text.upper()
    if upper in ("1", "MALICIOUS"):
        return Label.MALICIOUS
    if upper in ("0", "BENIGN"):
        return Label.BENIGN
    raise ValueError(f"unrecognized label value {value!r}")
