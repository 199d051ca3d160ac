"""Exception types raised by pcsent."""


class PcsentError(Exception):
    """Base class for all pcsent errors."""


class DomainError(PcsentError, ValueError):
    """An argument lies outside the domain of a function."""


class SeriesCapError(PcsentError, ArithmeticError):
    """A series or iteration did not converge within its hard term cap."""


class TruncationError(SeriesCapError):
    """A tail tolerance cannot be met below the truncation cap."""


class DegenerateNormError(PcsentError, ValueError):
    """The superposition norm vanishes, so the state is undefined."""
