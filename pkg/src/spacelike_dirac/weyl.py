"""
Weyl form of the spacelike Dirac-type equation.

xi = (phi + chi)/sqrt2 and eta = (phi - chi)/sqrt2 turn the mass term into
the only coupling between two two-component equations:

    d xi/dt  = -s sigma.grad xi  + i m_s eta
    d eta/dt = +s sigma.grad eta - i m_s xi

Lattice fields are 1D along z, stored as (n, 4) arrays (xi1, xi2, eta1, eta2).
"""

from typing import Callable, Tuple
import math
import numpy as np

from .core import Bispinor, FieldState, Representation, Species, ThreeVector, WeylPair
from .errors import DomainError
from .planewave import DensityCurrent
from .spinor_algebra import PAULI

Derivative = Callable[[np.ndarray], np.ndarray]

_ROOT_HALF = 1.0 / math.sqrt(2.0)

# Real, symmetric and its own inverse; maps (phi, chi) <-> (xi, eta).
WEYL_TRANSFORM = _ROOT_HALF * np.block([[np.eye(2), np.eye(2)], [np.eye(2), -np.eye(2)]]).astype(complex)
WEYL_TRANSFORM.setflags(write=False)

_SIGMA_Z_DIAG = np.array([1.0, -1.0])


def to_weyl(psi: Bispinor) -> WeylPair:
    phi, chi = psi.phi, psi.chi
    return WeylPair(xi=(phi + chi) * _ROOT_HALF, eta=(phi - chi) * _ROOT_HALF)


def from_weyl(w: WeylPair) -> Bispinor:
    phi = (w.xi + w.eta) * _ROOT_HALF
    chi = (w.xi - w.eta) * _ROOT_HALF
    return Bispinor(np.concatenate([phi, chi]))


def weyl_density_current(w: WeylPair) -> DensityCurrent:
    """rho = xi^dagger xi - eta^dagger eta, j = xi^dagger sigma xi + eta^dagger sigma eta."""
    rho = np.vdot(w.xi, w.xi).real - np.vdot(w.eta, w.eta).real
    j = [np.vdot(w.xi, s @ w.xi).real + np.vdot(w.eta, s @ w.eta).real for s in PAULI]
    return DensityCurrent(rho=float(rho), j=ThreeVector.from_array(j))


def weyl_density_current_field(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Per-site (rho, j_z) for a Weyl-layout field."""
    xi, eta = values[:, :2], values[:, 2:]
    xi_sq, eta_sq = np.abs(xi) ** 2, np.abs(eta) ** 2
    rho = xi_sq.sum(axis=1) - eta_sq.sum(axis=1)
    j_z = (xi_sq + eta_sq) @ _SIGMA_Z_DIAG
    return rho, j_z


def _sigma_z(field: np.ndarray) -> np.ndarray:
    return field * _SIGMA_Z_DIAG


def coupled_weyl_rhs(xi: np.ndarray, eta: np.ndarray, m_s: float, derivative: Derivative,
                     momentum_sign: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """Time derivatives of (xi, eta) fields of shape (n, 2); `derivative` is d/dz on the lattice."""
    d_xi = -momentum_sign * _sigma_z(derivative(xi)) + 1j * m_s * eta
    d_eta = momentum_sign * _sigma_z(derivative(eta)) - 1j * m_s * xi
    return d_xi, d_eta


def massless_weyl_rhs(xi: np.ndarray, species: Species, derivative: Derivative) -> np.ndarray:
    """Decoupled m_s = 0 equation: -sigma.grad xi for the antineutrino, +sigma.grad xi for the neutrino."""
    return -species.momentum_sign * _sigma_z(derivative(xi))


def weyl_rhs(values: np.ndarray, m_s: float, derivative: Derivative, momentum_sign: int = 1) -> np.ndarray:
    d_xi, d_eta = coupled_weyl_rhs(values[:, :2], values[:, 2:], m_s, derivative, momentum_sign)
    return np.concatenate([d_xi, d_eta], axis=1)


def weyl_mode_hamiltonians(k: np.ndarray, m_s: float, momentum_sign: int = 1) -> np.ndarray:
    """
    [[s sigma_z k, -m_s], [m_s, -s sigma_z k]] per wavenumber, the Dirac mode
    Hamiltonian conjugated by WEYL_TRANSFORM. Built entry by entry so the mass
    blocks are exactly zero at m_s = 0.
    """
    sk = momentum_sign * np.asarray(k, dtype=float)
    H = np.zeros((sk.size, 4, 4), dtype=complex)
    H[:, 0, 0], H[:, 1, 1] = sk, -sk
    H[:, 2, 2], H[:, 3, 3] = -sk, sk
    H[:, 0, 2] = H[:, 1, 3] = -m_s
    H[:, 2, 0] = H[:, 3, 1] = m_s
    return H


def to_weyl_state(state: FieldState) -> FieldState:
    if state.representation is not Representation.DIRAC:
        raise DomainError(f"Expected a Dirac-layout state, got {state.representation.value}")
    return _relabel(state, Representation.WEYL)


def from_weyl_state(state: FieldState) -> FieldState:
    if state.representation is not Representation.WEYL:
        raise DomainError(f"Expected a Weyl-layout state, got {state.representation.value}")
    return _relabel(state, Representation.DIRAC)


def _relabel(state: FieldState, representation: Representation) -> FieldState:
    return FieldState(
        grid=state.grid,
        time=state.time,
        values=state.values @ WEYL_TRANSFORM.T,
        m_s=state.m_s,
        momentum_sign=state.momentum_sign,
        representation=representation,
    )
