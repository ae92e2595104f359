"""Exception hierarchy shared by every xspectra module."""


class XSpectraError(ValueError):
    """Base class for all library errors."""


class InvalidLengthError(XSpectraError):
    pass


class DimensionError(XSpectraError):
    pass


class InvalidParameterError(XSpectraError):
    pass


class NonPositiveSpectrumError(XSpectraError):
    """The averaged periodogram ratio is not positive, so its logarithm is undefined."""


class DegenerateInputError(XSpectraError):
    pass


class LogOfZeroError(XSpectraError):
    pass


class InsufficientPointsError(XSpectraError):
    pass


class NoReferenceError(XSpectraError):
    pass


class EmptySampleError(XSpectraError):
    pass


class ConfigurationError(XSpectraError):
    pass
