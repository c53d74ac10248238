"""Exception hierarchy shared by every tanglekit module."""


class TangleKitError(ValueError):
    """Base class; the CLI maps subclasses onto exit codes."""


class NotSquare(TangleKitError):
    pass


class NotHermitian(TangleKitError):
    pass


class NotPSD(TangleKitError):
    pass


class BadDims(TangleKitError):
    pass


class TraceNotOne(TangleKitError):
    pass


class RankExceeded(TangleKitError):
    """The state has more than two eigenvalues above the rank tolerance."""


class OutsideBall(TangleKitError):
    pass


class OutsideSupport(TangleKitError):
    pass


class BadSubspace(TangleKitError):
    pass


class OutOfRange(TangleKitError):
    pass


class NotReal(TangleKitError):
    pass


class ConvergenceError(TangleKitError):
    pass
