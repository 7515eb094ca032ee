"""
Natural units and conversions.

Everything inside the package runs with c = hbar = 1: energies, masses and
momenta in eV, lengths in hbar*c/eV, times in hbar/eV. Conversions to
laboratory units happen only at the CLI boundary.
"""

from .errors import DomainError

# Constants
# ==============================================================================

# Speed of light [m / s]
C_M_PER_S = 299792458.0

# Reduced Planck constant [eV * s]
HBAR_EV_S = 6.582119569e-16

# hbar * c [eV * nm]
HBAR_C_EV_NM = 197.3269804


# Utilities
# ==============================================================================

def natural_length_to_nm(length: float) -> float:
    """Convert a length in hbar*c/eV to nanometers."""
    return length * HBAR_C_EV_NM


def nm_to_natural_length(length_nm: float) -> float:
    """Convert nanometers to hbar*c/eV."""
    return length_nm / HBAR_C_EV_NM


def natural_time_to_seconds(time: float) -> float:
    """Convert a time in hbar/eV to seconds."""
    return time * HBAR_EV_S


def seconds_to_natural_time(seconds: float) -> float:
    return seconds / HBAR_EV_S


def mass_square_to_ms(mass_square_ev2: float) -> float:
    """
    Map a measured (negative) mass-square m^2 c^4 in eV^2 to the positive
    spacelike mass parameter m_s c^2 in eV.
    """
    if mass_square_ev2 >= 0:
        raise DomainError(f"Spacelike mass-square must be negative, got {mass_square_ev2}")
    return (-mass_square_ev2) ** 0.5
