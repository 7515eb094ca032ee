"""
Spacelike Dirac: kinematics, plane waves and lattice dynamics of a
tachyonic (spacelike) neutrino described by a pseudo-Hermitian Dirac-type
equation.

Natural units throughout: c = hbar = 1, energies in eV.
"""

__version__ = "0.1.0"

# Core exports
from .core import (
    Bispinor,
    BoostVelocity,
    Branch,
    EvanescentPolicy,
    Event,
    FieldState,
    Grid1D,
    Integrator,
    PlaneWaveSolution,
    Regime,
    Representation,
    SpacelikeFourMomentum,
    Species,
    ThreeVector,
    TimelikeFourMomentum,
    WeylPair,
)
from .errors import (
    DomainError,
    EvanescentBlowupError,
    EvanescentError,
    SpacelikeError,
    VerificationError,
)
from .evolution import EvolutionConfig, EvolutionEngine, EvolutionReport
from .spinor_algebra import BASIS, hamiltonian, verify_algebra

__all__ = [
    "Bispinor",
    "BoostVelocity",
    "Branch",
    "EvanescentPolicy",
    "Event",
    "FieldState",
    "Grid1D",
    "Integrator",
    "PlaneWaveSolution",
    "Regime",
    "Representation",
    "SpacelikeFourMomentum",
    "Species",
    "ThreeVector",
    "TimelikeFourMomentum",
    "WeylPair",
    "DomainError",
    "EvanescentBlowupError",
    "EvanescentError",
    "SpacelikeError",
    "VerificationError",
    "EvolutionConfig",
    "EvolutionEngine",
    "EvolutionReport",
    "BASIS",
    "hamiltonian",
    "verify_algebra",
]
