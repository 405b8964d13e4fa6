"""Single-file versioned artifact container with canonical serialization.

The container is one JSON document holding every fitted component plus a
SHA-256 checksum computed over the canonical (sorted-keys, compact) payload
bytes. Canonical serialization makes save -> load -> save byte-identical,
so fixed-seed pipelines reproduce artifacts exactly. An artifact missing
components is saved with status PARTIAL and is refused by the scorer and
the HTTP service.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..calibrate import Calibrator
from ..errors import ArtifactError
from ..features import Standardizer, Vocabulary
from ..fusion import FusionConfig
from ..learn.forest import ForestModel
from ..learn.logistic import LogisticModel
from .scorer import Scorer

FORMAT_VERSION = "1"
SERVING = "SERVING"
PARTIAL = "PARTIAL"

_COMPONENTS = ("vocabulary", "logistic", "calibrator_logs", "standardizer",
               "forest", "calibrator_malware", "fusion")


def canonical_json_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True, allow_nan=False).encode("ascii")


def checksum_of(payload: dict) -> str:
    return "sha256:" + hashlib.sha256(canonical_json_bytes(payload)).hexdigest()


@dataclass
class ModelArtifact:
    format_version: str = FORMAT_VERSION
    created_at: int = 0  # epoch ms
    vocabulary: Vocabulary | None = None
    logistic: LogisticModel | None = None
    calibrator_logs: Calibrator | None = None
    standardizer: Standardizer | None = None
    forest: ForestModel | None = None
    calibrator_malware: Calibrator | None = None
    fusion: FusionConfig | None = None
    fingerprints: dict = field(default_factory=dict)

    def missing_components(self) -> list[str]:
        return [name for name in _COMPONENTS if getattr(self, name) is None]

    @property
    def status(self) -> str:
        return SERVING if not self.missing_components() else PARTIAL

    def to_payload(self) -> dict:
        def _opt(component):
            return None if component is None else component.to_dict()

        return {
            "format_version": self.format_version,
            "created_at": self.created_at,
            "status": self.status,
            "vocabulary": _opt(self.vocabulary),
            "logistic": _opt(self.logistic),
            "calibrators": {"logs": _opt(self.calibrator_logs),
                            "malware": _opt(self.calibrator_malware)},
            "standardizer": _opt(self.standardizer),
            "forest": _opt(self.forest),
            "fusion": _opt(self.fusion),
            "fingerprints": self.fingerprints,
        }

    @property
    def checksum(self) -> str:
        return checksum_of(self.to_payload())

    @property
    def version(self) -> str:
        """Short content-derived identifier reported by the service."""
        return self.checksum.split(":", 1)[1][:12]

    @classmethod
    def from_payload(cls, payload: dict) -> "ModelArtifact":
        def _opt(value, parser):
            return None if value is None else parser(value)

        calibrators = payload.get("calibrators", {})
        return cls(
            format_version=payload["format_version"],
            created_at=int(payload["created_at"]),
            vocabulary=_opt(payload.get("vocabulary"), Vocabulary.from_dict),
            logistic=_opt(payload.get("logistic"), LogisticModel.from_dict),
            calibrator_logs=_opt(calibrators.get("logs"), Calibrator.from_dict),
            standardizer=_opt(payload.get("standardizer"), Standardizer.from_dict),
            forest=_opt(payload.get("forest"), ForestModel.from_dict),
            calibrator_malware=_opt(calibrators.get("malware"), Calibrator.from_dict),
            fusion=_opt(payload.get("fusion"), FusionConfig.from_dict),
            fingerprints=dict(payload.get("fingerprints", {})),
        )

    def to_scorer(self) -> Scorer:
        missing = self.missing_components()
        if missing:
            raise ArtifactError(
                f"artifact is PARTIAL and cannot score; missing components: {', '.join(missing)}")
        return Scorer(vocabulary=self.vocabulary, logistic=self.logistic,
                      calibrator_logs=self.calibrator_logs,
                      standardizer=self.standardizer, forest=self.forest,
                      calibrator_malware=self.calibrator_malware,
                      fusion_config=self.fusion, artifact_version=self.version)


def build_artifact(vocabulary=None, logistic=None, calibrator_logs=None,
                   standardizer=None, forest=None, calibrator_malware=None,
                   fusion=None, fingerprints=None,
                   created_at: int | None = None) -> ModelArtifact:
    """Assemble an artifact; ``created_at=None`` stamps the wall clock.

    Reproducible pipelines must pass an explicit ``created_at`` so two runs
    of the same experiment produce byte-identical files.
    """
    if created_at is None:
        created_at = time.time_ns() // 1_000_000
    return ModelArtifact(created_at=int(created_at), vocabulary=vocabulary,
                         logistic=logistic, calibrator_logs=calibrator_logs,
                         standardizer=standardizer, forest=forest,
                         calibrator_malware=calibrator_malware, fusion=fusion,
                         fingerprints=dict(fingerprints or {}))


def save_artifact(artifact: ModelArtifact, path: str | Path) -> str:
    """Write the canonical container file; returns the content checksum."""
    payload = artifact.to_payload()
    checksum = checksum_of(payload)
    body = canonical_json_bytes({"checksum": checksum, "payload": payload}) + b"\n"
    Path(path).write_bytes(body)
    return checksum


def load_artifact(path: str | Path) -> ModelArtifact:
    """Load and verify a container file (checksum, format, completeness)."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ArtifactError(f"cannot read artifact {path}: {exc}") from exc
    try:
        envelope = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ArtifactError(
            f"{path}: not a valid artifact container (truncated or corrupt, "
            f"checksum cannot be verified): {exc}") from exc
    if not isinstance(envelope, dict) or set(envelope) != {"checksum", "payload"}:
        raise ArtifactError(f"{path}: not an artifact container (bad envelope keys)")
    payload = envelope["payload"]
    if checksum_of(payload) != envelope["checksum"]:
        raise ArtifactError(f"{path}: checksum mismatch; file is corrupt")
    if payload.get("format_version") != FORMAT_VERSION:
        raise ArtifactError(
            f"{path}: unknown format_version {payload.get('format_version')!r}, "
            f"expected {FORMAT_VERSION!r}")
    if payload.get("status") == SERVING:
        missing = [name for name in ("vocabulary", "logistic", "standardizer",
                                     "forest", "fusion")
                   if payload.get(name) is None]
        missing += [f"calibrator_{kind}" for kind in ("logs", "malware")
                    if payload.get("calibrators", {}).get(kind) is None]
        if missing:
            raise ArtifactError(
                f"{path}: SERVING artifact is missing components: {', '.join(missing)}")
    try:
        return ModelArtifact.from_payload(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactError(f"{path}: malformed component payload: {exc}") from exc
