"""Exception types raised across the package.

Every domain error derives from :class:`CherncountError`, which the command
line front end maps to exit code 1.
"""


class CherncountError(Exception):
    """Base class for all domain errors."""


class ParseError(CherncountError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


class InfiniteColengthError(CherncountError, ValueError):
    """The ideal has no pure power of x or of y."""


class NotAQuotientStepError(CherncountError, ValueError):
    """Two ideals are not nested with a one-dimensional quotient."""


class FiltrationError(CherncountError, ValueError):
    pass


class NonMonomialLimitError(CherncountError, RuntimeError):
    """A flat limit turned out not to be spanned by monomials."""


class FanError(CherncountError, ValueError):
    pass


class RingError(CherncountError, ValueError):
    pass


class ChernError(CherncountError, ValueError):
    pass


class SolverError(CherncountError, ValueError):
    pass
