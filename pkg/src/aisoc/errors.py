"""Exception types shared across the toolkit."""


class AisocError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(AisocError):
    """Invalid scenario, augmentation, or CLI configuration."""


class LoadError(AisocError):
    """A data file could not be read or is structurally invalid."""


class SplitError(AisocError):
    """A dataset split could not be produced as specified."""


class TrainingError(AisocError):
    """A transformer or model could not be fitted (e.g. single-class input)."""


class DimensionError(AisocError):
    """Feature dimension of an input does not match a fitted component."""


class CalibrationError(AisocError):
    """Score calibration could not be fitted on the given data."""


class TuningError(AisocError):
    """Threshold tuning preconditions were violated."""


class MetricError(AisocError):
    """A metric is undefined for the given inputs."""


class ArtifactError(AisocError):
    """A model artifact could not be saved, loaded, or served."""
