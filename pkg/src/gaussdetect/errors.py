"""Exception hierarchy shared across the package."""


class GaussDetectError(ValueError):
    """Base class for input and validation failures."""


class InvalidInput(GaussDetectError):
    """Non-finite, wrongly shaped or otherwise unusable data."""


class DegenerateSeries(GaussDetectError):
    """A series has zero spread where a positive one is required."""


class LengthMismatch(GaussDetectError):
    pass


class NotStandardized(GaussDetectError):
    pass


class InsufficientSample(GaussDetectError):
    """Sample size below the floor of the requested procedure."""
