"""Exception hierarchy shared by every module.

Each error maps to a CLI exit code through ``exit_code``: validation
problems exit with 2, size guards with 3.
"""


class HypppError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class ShapeError(HypppError, ValueError):
    """Array or matrix dimensions are inconsistent."""


class InvalidSignancy(HypppError, ValueError):
    """A signancy set is empty, out of range, or would become empty."""


class RankError(HypppError, ValueError):
    """The rank L is incompatible with the ground space or point count."""


class ArgumentError(HypppError, ValueError):
    """An argument is outside its admissible range."""


class ConditioningError(HypppError, ValueError):
    """Conditioning on a prefix of (numerically) zero density."""


class InconsistentMoments(HypppError, ValueError):
    """Factorial moments do not invert to a probability mass function."""


class SpectrumError(HypppError, ValueError):
    """A matrix spectrum falls outside [0, 1]."""


class TooLarge(HypppError):
    """An exhaustive enumeration would exceed its size guard."""

    exit_code = 3
