"""Exception hierarchy shared across the pipeline stages."""


class PkgLearnError(Exception):
    """Base class for all pkglearn errors."""


class ConfigurationError(PkgLearnError):
    """A configuration value is out of range or names an unknown field."""


class ValidationError(PkgLearnError):
    """Input data violates a documented contract."""


class SerializationError(PkgLearnError):
    """A graph cannot be rendered in the canonical text format."""


class NTriplesParseError(PkgLearnError):
    """A serialized graph file is malformed."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class NumericError(PkgLearnError):
    """A model computation produced NaN or Inf."""

    def __init__(self, message, layer=None):
        if layer is not None:
            message = f"[{layer}] {message}"
        super().__init__(message)
        self.layer = layer
