"""Exception types raised across the package."""


class ParkMatchError(Exception):
    """Base class for all package errors."""


class StructuralError(ParkMatchError):
    """Inputs are malformed, e.g. time vectors of different lengths or
    preference lists that are not mutually consistent."""


class ParameterError(ParkMatchError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class IngestionError(ParkMatchError, ValueError):
    """A driver/spot record could not be turned into a participant."""


class SizeError(ParkMatchError):
    """Instance too large for exhaustive enumeration."""


class ConfigError(ParkMatchError, ValueError):
    """Invalid scenario or experiment configuration."""
