"""Request scoring against a loaded artifact's models and calibrators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import calibrate
from ..errors import DimensionError
from ..features import Standardizer, Vocabulary, transform_dense, transform_text
from ..fusion import FusionConfig, TriageLabel, fuse_scores
from ..learn.forest import ForestModel, score_forest
from ..learn.logistic import LogisticModel, score_logistic

_REQUEST_FIELDS = {"log_message", "malware_features", "entity_id"}


class RequestError(ValueError):
    """A scoring request is malformed (HTTP layer maps this to 400)."""


@dataclass
class Scorer:
    """Immutable scoring façade over a complete artifact component set."""

    vocabulary: Vocabulary
    logistic: LogisticModel
    calibrator_logs: calibrate.Calibrator
    standardizer: Standardizer
    forest: ForestModel
    calibrator_malware: calibrate.Calibrator
    fusion_config: FusionConfig
    artifact_version: str = "unversioned"

    def score_log(self, message: str) -> float:
        """Calibrated probability that a log line is malicious."""
        raw = score_logistic(self.logistic, transform_text(message, self.vocabulary))
        return float(calibrate.apply(self.calibrator_logs, raw))

    def score_malware(self, features) -> float:
        """Calibrated probability that a static-feature row is malicious."""
        raw = score_forest(self.forest, transform_dense(np.asarray(features, dtype=float),
                                                        self.standardizer))
        return float(calibrate.apply(self.calibrator_malware, raw))

    def triage(self, s_m: float, s_l: float) -> TriageLabel:
        return fuse_scores(s_m, s_l, self.fusion_config.t_m, self.fusion_config.t_l)

    def score_request(self, request: dict) -> dict:
        """Score one {log_message?, malware_features?, entity_id?} request.

        A missing modality contributes score 0.0 to the fusion rule (the
        conservative no-evidence floor) and the response names the degraded
        modality; at least one modality must be present.
        """
        if not isinstance(request, dict):
            raise RequestError("request must be a JSON object")
        unknown = set(request) - _REQUEST_FIELDS
        if unknown:
            raise RequestError(f"unknown request fields: {sorted(unknown)}")

        message = request.get("log_message")
        features = request.get("malware_features")
        if message is None and features is None:
            raise RequestError("request needs log_message and/or malware_features")
        if message is not None and not isinstance(message, str):
            raise RequestError("log_message must be a string")
        if features is not None:
            if (not isinstance(features, (list, tuple))
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                               for v in features)):
                raise RequestError("malware_features must be an array of numbers")
            if not all(math.isfinite(float(v)) for v in features):
                raise RequestError("malware_features must be finite")

        s_l = self.score_log(message) if message is not None else None
        try:
            s_m = self.score_malware(features) if features is not None else None
        except DimensionError as exc:
            raise RequestError(str(exc)) from None

        if message is not None and features is not None:
            modality = "fused"
        elif message is not None:
            modality = "logs_only"
        else:
            modality = "malware_only"
        label = self.triage(s_m if s_m is not None else 0.0,
                            s_l if s_l is not None else 0.0)

        response: dict = {}
        if "entity_id" in request:
            entity_id = request["entity_id"]
            if not isinstance(entity_id, str):
                raise RequestError("entity_id must be a string")
            response["entity_id"] = entity_id
        if s_m is not None:
            response["s_m"] = s_m
        if s_l is not None:
            response["s_l"] = s_l
        response["label"] = label.name
        response["modality"] = modality
        response["artifact_version"] = self.artifact_version
        return response
