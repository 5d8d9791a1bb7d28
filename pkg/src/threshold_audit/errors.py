"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class ThresholdError(Exception):
    """Base class for every error raised by threshold-audit."""

    exit_code = 1


class InvalidInput(ThresholdError):
    """Raised when an input violates a documented precondition."""

    exit_code = 2


class TrivialFamily(InvalidInput):
    """Raised when a family would be empty or the full power set."""


class DomainError(InvalidInput):
    """Raised when numeric arguments fall outside their domain."""


class DegenerateMeasure(InvalidInput):
    """Raised when mu_p(F) is too close to 0 or 1 for a log-ratio to mean anything."""


class BadParameter(InvalidInput):
    """Raised for inconsistent constructor or configuration parameters."""


class NotATree(InvalidInput):
    """Raised when a graph declared acyclic is not a tree."""


class NoEmbedding(InvalidInput):
    """Raised when a pattern graph cannot fit into the host vertex set."""


class NotDivisible(InvalidInput):
    """Raised when a partition question needs k | n and it does not hold."""


class ParseError(InvalidInput):
    """Raised when a JSON input file cannot be parsed or validated."""


class CapExceeded(ThresholdError):
    """Raised when an exact computation would exceed a configured cap."""

    exit_code = 3


class GroundSetTooLarge(CapExceeded):
    """Raised when the ground set is larger than the enumeration cap."""


class TooManyMinimalSets(CapExceeded):
    """Raised when a family has more minimal sets than the cover cap allows."""


class GraphTooLarge(CapExceeded):
    """Raised when a graph exceeds the brute-force vertex or edge cap."""


class TooLarge(CapExceeded):
    """Raised when a decision procedure input exceeds its exact-DP cap."""


class Inconclusive(ThresholdError):
    """Raised when a Monte Carlo query exhausts its trial budget near 1/2."""

    exit_code = 4


class SweepFailed(ThresholdError):
    """Raised when the optimality sweep finds no qualifying p (an internal bug)."""


class GenerationFailed(ThresholdError):
    """Raised when a random generator cannot produce a valid instance."""
