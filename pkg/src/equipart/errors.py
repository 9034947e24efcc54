"""Exception hierarchy."""


class EquipartError(Exception):
    """Base class for all package errors."""


class DimensionError(EquipartError, ValueError):
    pass


class ZeroMassError(EquipartError, ValueError):
    pass


class MeasureFormatError(EquipartError, ValueError):
    """A measure or report file violates its schema; the message names the field."""


class FrameTooLong(EquipartError, ValueError):
    pass


class NotIndependentError(EquipartError, ValueError):
    pass


class NotOddError(EquipartError, ValueError):
    pass


class NotEquivariantError(EquipartError, ValueError):
    pass


class KTooLarge(EquipartError, ValueError):
    """Requested number of partitions violates a stated bound (named in the message)."""


class BudgetExceeded(EquipartError, ValueError):
    """Test map has more components than the sphere dimension allows."""


class DimensionTooSmall(EquipartError, ValueError):
    pass


class NoConvergence(EquipartError, RuntimeError):
    """All restarts exhausted without reaching the tolerance.

    The best point found is attached as ``result`` (a search result) and, when
    raised from a driver, the corresponding ``report``.
    """

    def __init__(self, message, result=None, report=None):
        super().__init__(message)
        self.result = result
        self.report = report


class DegenerateRegion(NoConvergence):
    """Every restart was attracted to the excluded degenerate circle."""
