"""Exception hierarchy shared by all modules."""


class GoupillaudError(ValueError):
    """Base class for domain errors raised by this package."""


class NonPositiveDrift(GoupillaudError):
    pass


class BadParameter(GoupillaudError):
    pass


class BadWindow(GoupillaudError):
    pass


class BadLevel(GoupillaudError):
    pass


class OutOfWindow(GoupillaudError):
    """A time argument falls outside the simulated window.

    Usually means the window has to be enlarged.
    """


class OutOfRange(GoupillaudError):
    """A space argument falls outside the range attained by a path."""


class InvalidGrid(GoupillaudError):
    pass


class GridMismatch(GoupillaudError):
    pass


class BadExponent(GoupillaudError):
    pass


class BadBandwidth(GoupillaudError):
    pass


class BadSteps(GoupillaudError):
    pass


class InsufficientWindow(GoupillaudError):
    pass


class ConfigError(GoupillaudError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
