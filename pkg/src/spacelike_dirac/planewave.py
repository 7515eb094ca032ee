"""
Closed-form plane waves of the spacelike Dirac-type equation.

Plane waves run along z. With A = (|p| - m_s)/|E| and N = sqrt((|p| + m_s)/2m_s)
the positive-momentum antineutrino basis is

    psi1 = N(1, 0, A, 0)    psi2 = N(0, -A, 0, 1)    (E > 0)
    psi3 = N(1, 0, -A, 0)   psi4 = N(0, A, 0, 1)     (E < 0)

and the neutrino equation (minus sign on the momentum operator) swaps which
helicity carries the positive density.
"""

from typing import Dict, Optional, Tuple
from dataclasses import dataclass
import logging
import math
import numpy as np
from dataclasses_json import dataclass_json

from .core import Bispinor, Branch, PlaneWaveSolution, Regime, Species, ThreeVector
from .errors import DomainError, EvanescentError, SingularThresholdError, VerificationError
from .kinematics import dispersion_energy
from .spinor_algebra import BASIS, hamiltonian, helicity_operator, helicity_pair, spin_rotation

HELICITY_TOLERANCE = 1e-12

Z_AXIS = ThreeVector(0.0, 0.0, 1.0)


@dataclass_json
@dataclass(frozen=True)
class DensityCurrent:
    """rho = psi^dagger gamma5 psi and j = psi^dagger gamma5 alpha psi."""
    rho: float
    j: ThreeVector

    @property
    def velocity(self) -> float:
        """|j| / rho; the propagation speed of a plane wave."""
        if self.rho == 0.0:
            return math.inf
        return self.j.norm() / self.rho


@dataclass_json
@dataclass(frozen=True)
class Bilinears:
    scalar: float          # psi-bar psi
    pseudoscalar: float    # Re(i psi-bar gamma5 psi)


def chi_from_phi(p: float, E: float, m_s: float) -> float:
    """(p - m_s)/E, the factor with chi = ratio * phi in the helicity +1 channel."""
    if E == 0:
        raise SingularThresholdError(f"chi/phi ratio is singular at E = 0 (|p| = m_s = {m_s})")
    return (p - m_s) / E


def normalization_factors(p: float, m_s: float) -> Tuple[float, float]:
    """(A, N) for a propagating momentum |p| > m_s."""
    d = _propagating(p, m_s)
    return (d.p - m_s) / d.E_plus, math.sqrt((d.p + m_s) / (2.0 * m_s))


def _propagating(p: float, m_s: float):
    if not m_s > 0:
        raise DomainError(f"Plane waves need m_s > 0 (got {m_s}); use the weyl module for m_s = 0")
    d = dispersion_energy(p, m_s)
    if d.regime is Regime.EVANESCENT:
        raise EvanescentError(f"|p| = {d.p} < m_s = {m_s}: no propagating plane wave (Im E = {d.kappa})")
    if d.regime is Regime.THRESHOLD:
        raise SingularThresholdError(f"|p| = m_s = {m_s}: E = 0, A is undefined")
    return d


def z_axis_bispinor(k: float, m_s: float, momentum_sign: int, branch: Branch) -> Bispinor:
    """
    Bispinor of one branch for the 1D momentum k (either sign).

    Propagating modes carry the N normalisation, so k > 0 with
    momentum_sign = +1 reproduces the table above. Evanescent modes use the
    unit-normalised vector of the continued branch E = +-i sqrt(m_s^2 - k^2);
    the threshold returns the kernel vector of the requested helicity.
    """
    if not m_s > 0:
        raise DomainError(f"m_s must be positive, got {m_s}")
    d = dispersion_energy(k, m_s)
    helicity, energy_sign = branch.helicity, branch.energy_sign
    q = momentum_sign * helicity * d.p

    if d.regime is Regime.PROPAGATING:
        energy = energy_sign * d.E_plus
        scale = math.sqrt((d.p + m_s) / (2.0 * m_s))
    elif d.regime is Regime.EVANESCENT:
        energy = complex(0.0, energy_sign * d.kappa)
        scale = 1.0
    else:
        energy, scale = 0.0, 1.0

    a, b = helicity_pair(q, m_s, energy)
    slot = 0 if helicity == 1 else 1
    vector = np.zeros(4, dtype=complex)
    vector[slot], vector[2 + slot] = scale * a, scale * b
    if k < 0:
        vector = spin_rotation(-Z_AXIS) @ vector
    return Bispinor(vector)


def plane_wave(p: float, m_s: float, branch: Branch,
               species: Species = Species.ANTINEUTRINO) -> PlaneWaveSolution:
    """Closed-form solution of one branch at signed momentum p along z."""
    d = _propagating(p, m_s)
    A, N = normalization_factors(p, m_s)
    return PlaneWaveSolution(
        p=float(p),
        m_s=m_s,
        E=branch.energy_sign * d.E_plus,
        helicity=branch.helicity,
        energy_sign=branch.energy_sign,
        species=species,
        bispinor=z_axis_bispinor(p, m_s, species.momentum_sign, branch),
        A=A,
        N=N,
    )


def bispinor_basis(p: float, m_s: float, momentum_sign: int = 1) -> Dict[Branch, PlaneWaveSolution]:
    """The four branches psi1..psi4 at p > 0 along z."""
    if not p > 0:
        raise DomainError(f"bispinor_basis takes p > 0 along z, got {p}")
    species = Species.from_momentum_sign(momentum_sign)
    return {branch: plane_wave(p, m_s, branch, species) for branch in Branch}


def density_current(psi: Bispinor) -> DensityCurrent:
    c = psi.components
    g5 = BASIS.gamma5
    rho = np.vdot(c, g5 @ c)
    j = [np.vdot(c, g5 @ a @ c).real for a in BASIS.alphas]
    return DensityCurrent(rho=float(rho.real), j=ThreeVector.from_array(j))


def bilinears(psi: Bispinor) -> Bilinears:
    c = psi.components
    psi_bar = c.conj() @ BASIS.beta
    return Bilinears(
        scalar=float((psi_bar @ c).real),
        pseudoscalar=float((1j * (psi_bar @ BASIS.gamma5 @ c)).real),
    )


def solution_residual(solution: PlaneWaveSolution) -> float:
    """||H psi - E psi|| / ||H||."""
    H = hamiltonian(ThreeVector(0.0, 0.0, solution.p), solution.m_s, solution.momentum_sign)
    return H.residual(solution.E, solution.bispinor.components) / H.norm()


def helicity_of(psi: Bispinor, n: ThreeVector) -> Optional[int]:
    """Eigenvalue of diag(sigma.n, sigma.n) on psi, or None if psi is not an eigenvector."""
    c = psi.components
    applied = helicity_operator(n) @ c
    for value in (1, -1):
        if np.linalg.norm(applied - value * c) <= HELICITY_TOLERANCE * np.linalg.norm(c):
            return value
    return None


def rotate_bispinor(psi: Bispinor, n: ThreeVector) -> Bispinor:
    """Carry a z-axis bispinor onto the direction n; helicity labels are kept."""
    return Bispinor(spin_rotation(n) @ psi.components)


def physical_selection(p: float, m_s: float, species: Species) -> PlaneWaveSolution:
    """
    The only E > 0, rho > 0 state: right-handed psi1 for the antineutrino,
    left-handed psi_down(+) for the neutrino.
    """
    basis = bispinor_basis(p, m_s, species.momentum_sign)
    helicity = species.physical_helicity
    chosen = basis[Branch.from_labels(helicity, 1)]
    complement = basis[Branch.from_labels(-helicity, 1)]

    rho_chosen = density_current(chosen.bispinor).rho
    rho_complement = density_current(complement.bispinor).rho
    if not (rho_chosen > 0 and rho_complement < 0):
        raise VerificationError(
            f"Expected rho > 0 for helicity {helicity} and rho < 0 for its partner, "
            f"got {rho_chosen} and {rho_complement}"
        )
    logging.debug(f"Physical {species.value} state at p={p}, m_s={m_s}: helicity {helicity}, rho={rho_chosen}")
    return chosen
