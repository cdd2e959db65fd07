"""Exception types raised by the solvers and drivers."""


class SNError(Exception):
    """Base class for all package errors."""


class ConfigError(SNError, ValueError):
    pass


class NumericalError(SNError, RuntimeError):
    """A solver produced or detected an unusable numerical state."""


class NonConvergence(NumericalError):
    pass


class NoBoundState(NumericalError):
    pass


class NormBlowup(NumericalError):
    pass


class NotProductState(NumericalError, ValueError):
    pass
