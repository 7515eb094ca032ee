"""
Exception hierarchy for the spacelike Dirac toolkit.

Regime classifications that are legitimate physics (evanescent dispersion,
infinite speed at E = 0) are returned as values, never raised.
"""

from typing import List, Optional


class SpacelikeError(Exception):
    """Root of every error raised by this package."""


class DomainError(SpacelikeError, ValueError):
    """An input violates an operation's precondition."""


class InvalidBoostError(DomainError):
    """Boost speed |v| >= c."""


class FrameMismatchError(DomainError):
    """Events or states from different frames were combined."""


class EvanescentError(DomainError):
    """A propagating solution was requested with |p| < m_s c."""


class SingularThresholdError(DomainError):
    """A closed form divides by E at the threshold |p| = m_s c."""


class GridMismatchError(DomainError):
    """Two field states live on different lattices."""


class StabilityError(DomainError):
    """Explicit time step above the configured CFL bound."""


class EvanescentBlowupError(SpacelikeError, ArithmeticError):
    """Evanescent growth crossed the amplitude cap (or was forbidden by policy)."""

    def __init__(self, message: str, modes: Optional[List[int]] = None):
        super().__init__(message)
        self.modes: List[int] = list(modes or [])


class VerificationError(SpacelikeError):
    """A consistency check that must hold did not."""
