"""Exception hierarchy shared by every module of the package."""


class HexFinslerError(Exception):
    """Base class for all errors raised by hexfinsler."""


class UsageError(HexFinslerError, ValueError):
    """A request is malformed (orders out of range, wrong shapes, mixed rings)."""


class DomainError(HexFinslerError, ValueError):
    """A point lies outside the domain of a field (e.g. L <= 0)."""


class DegeneracyError(HexFinslerError, ArithmeticError):
    """A matrix that must be invertible is singular or badly conditioned.

    ``condition`` carries the estimate that triggered the refusal, when known.
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ConstructionError(HexFinslerError, ValueError):
    """Parameters do not define a valid object (e.g. Randers with |b|_a >= 1)."""


class SingularChangeError(HexFinslerError, ArithmeticError):
    """The exponential change degenerates at the point (nu or m^2 + nu near 0)."""


class ConfigError(HexFinslerError, ValueError):
    """A scenario file fails to parse or validate."""


class DegenerateSurfaceError(DegeneracyError):
    """The projection factors B^i_alpha lose rank at the parameter point."""
