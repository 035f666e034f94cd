"""Exception hierarchy shared by the algebra, geometry and engine layers."""


class SinrError(Exception):
    """Base class for every error raised by sinrbatch."""


class DuplicatePoint(SinrError, ValueError):
    """Interpolation nodes are not pairwise distinct."""


class EmptyInput(SinrError, ValueError):
    """An aggregate (sum of fractions, ...) was asked for over no elements."""


class PoleAtQuery(SinrError, ArithmeticError):
    """A merged denominator vanishes at an evaluation point."""

    def __init__(self, where, message=None):
        self.where = where
        super().__init__(message or f"denominator vanishes at {where!r}")


class QueryOnTransmitter(SinrError, ValueError):
    """A receiver sits exactly on a transmitter, where the SIN ratio is undefined."""

    def __init__(self, receiver, transmitter=None):
        self.receiver = receiver
        self.transmitter = transmitter
        msg = f"receiver {receiver} coincides with a transmitter"
        if transmitter is not None:
            msg += f" (transmitter {transmitter})"
        super().__init__(msg)


class InvalidK(SinrError, ValueError):
    """Polygon size k must be an even integer >= 4."""


class InvalidEps(SinrError, ValueError):
    """Approximation parameter outside (0, 1)."""


class ScenarioError(SinrError, ValueError):
    """Malformed or inconsistent scenario description."""


class EngineMismatch(SinrError, ValueError):
    """The scenario does not satisfy the selected engine's preconditions."""
