"""Exception hierarchy shared by all qrclab modules."""


class QRCLabError(Exception):
    """Base class for all errors raised by qrclab."""


class ConfigurationError(QRCLabError):
    """Invalid parameter, qubit index, or incompatible run configuration."""


class DataError(QRCLabError):
    """Non-finite or structurally invalid input data."""


class FitError(QRCLabError):
    """Readout training failed (e.g. singular normal equations at alpha=0)."""


class MetricError(QRCLabError):
    """A requested metric is undefined for the given inputs."""


class SchemaError(QRCLabError):
    """Config file violates the strict schema; names the offending key."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")
