"""Exception hierarchy shared across the package.

Each class maps to a distinct CLI exit code (see cli.EXIT_CODES).
"""


class MonorunError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPermutationError(MonorunError, ValueError):
    """Input is not a permutation of 1..n (empty, duplicates, gaps, wrong shape)."""


class ParameterError(MonorunError, ValueError):
    """A numeric argument is outside its valid range."""


class EnumerationCapError(MonorunError, ValueError):
    """Requested exhaustive enumeration beyond the configured size cap."""
