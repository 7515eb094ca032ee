"""
4x4 matrix algebra of the spacelike Dirac-type equation.

alpha_i = [[0, sigma_i], [sigma_i, 0]], beta_s = [[0, I], [-I, 0]],
beta = diag(I, -I), gamma5 = [[0, I], [I, 0]], beta_s = beta gamma5.
The Hamiltonian H = s (alpha . p) + beta_s m_s is gamma5-pseudo-Hermitian,
H^2 = (p^2 - m_s^2) I, so every 4x4 problem here has a closed form.
"""

from typing import List, Optional, Tuple
from dataclasses import dataclass, field, replace
import itertools
import numpy as np
from dataclasses_json import dataclass_json

from .core import Bispinor, ThreeVector
from .errors import DomainError

MATRIX_TOLERANCE = 1e-14

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_1, SIGMA_2, SIGMA_3)
I2 = np.eye(2, dtype=complex)
Z2 = np.zeros((2, 2), dtype=complex)


def _frozen(matrix: np.ndarray) -> np.ndarray:
    arr = np.array(matrix, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MatrixBasis:
    """The seven matrices of the spacelike Dirac-type equation."""
    alpha1: np.ndarray
    alpha2: np.ndarray
    alpha3: np.ndarray
    beta: np.ndarray
    beta_s: np.ndarray
    gamma5: np.ndarray
    identity: np.ndarray = field(default_factory=lambda: _frozen(np.eye(4)))

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "alpha3", "beta", "beta_s", "gamma5", "identity"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def alphas(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.alpha1, self.alpha2, self.alpha3)

    def with_beta_s(self, matrix: np.ndarray) -> "MatrixBasis":
        return replace(self, beta_s=matrix)

    def with_alphas(self, a1: np.ndarray, a2: np.ndarray, a3: np.ndarray) -> "MatrixBasis":
        return replace(self, alpha1=a1, alpha2=a2, alpha3=a3)


@dataclass_json
@dataclass(frozen=True)
class IdentityCheck:
    name: str
    max_deviation: float
    passed: bool


@dataclass_json
@dataclass(frozen=True)
class AlgebraReport:
    checks: List[IdentityCheck]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[IdentityCheck]:
        return [c for c in self.checks if not c.passed]


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    """H = s (alpha . p) + beta_s m_s for one momentum."""
    matrix: np.ndarray
    p: ThreeVector
    m_s: float
    momentum_sign: int

    def hermiticity_defect(self) -> float:
        """Spectral norm of H - H^dagger (2 m_s for this H)."""
        return float(np.linalg.norm(self.matrix - self.matrix.conj().T, ord=2))

    def pseudo_hermiticity_defect(self) -> float:
        """Max entry of gamma5 H^dagger gamma5 - H."""
        g5 = GAMMA5
        return float(np.max(np.abs(g5 @ self.matrix.conj().T @ g5 - self.matrix)))

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, ord=2))

    def residual(self, eigenvalue: complex, vector: np.ndarray) -> float:
        return float(np.linalg.norm(self.matrix @ vector - eigenvalue * vector))


@dataclass(frozen=True, eq=False)
class EigenPair:
    eigenvalue: complex
    eigenvector: Bispinor
    helicity: Optional[int] = None


def _block(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    return np.block([[a, b], [c, d]])


def build_basis() -> MatrixBasis:
    """alpha_i from Pauli blocks, beta, beta_s and gamma5; entries in {0, +-1, +-i}."""
    alphas = [_block(Z2, s, s, Z2) for s in PAULI]
    return MatrixBasis(
        alpha1=alphas[0],
        alpha2=alphas[1],
        alpha3=alphas[2],
        beta=_block(I2, Z2, Z2, -I2),
        beta_s=_block(Z2, I2, -I2, Z2),
        gamma5=_block(Z2, I2, I2, Z2),
    )


BASIS = build_basis()
GAMMA5 = BASIS.gamma5


def anticommutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B + B @ A


def _deviation(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.max(np.abs(lhs - rhs)))


def verify_algebra(basis: MatrixBasis) -> AlgebraReport:
    """Check the anticommutation relations and beta_s = beta gamma5, entry by entry."""
    one = basis.identity
    checks: List[IdentityCheck] = []

    def record(name: str, lhs: np.ndarray, rhs: np.ndarray):
        dev = _deviation(lhs, rhs)
        checks.append(IdentityCheck(name=name, max_deviation=dev, passed=dev <= MATRIX_TOLERANCE))

    for (i, a_i), (j, a_j) in itertools.product(enumerate(basis.alphas, 1), repeat=2):
        record(f"{{alpha{i},alpha{j}}} = {2 if i == j else 0}*I",
               anticommutator(a_i, a_j), 2.0 * one if i == j else 0.0 * one)
    for i, a_i in enumerate(basis.alphas, 1):
        record(f"{{alpha{i},beta_s}} = 0", anticommutator(a_i, basis.beta_s), 0.0 * one)
    record("beta_s^2 = -I", basis.beta_s @ basis.beta_s, -one)
    record("beta_s = beta*gamma5", basis.beta_s, basis.beta @ basis.gamma5)
    record("beta^2 = I", basis.beta @ basis.beta, one)
    record("gamma5^2 = I", basis.gamma5 @ basis.gamma5, one)
    record("beta_s^dagger = -beta_s", basis.beta_s.conj().T, -basis.beta_s)
    record("beta^dagger = beta", basis.beta.conj().T, basis.beta)
    record("gamma5^dagger = gamma5", basis.gamma5.conj().T, basis.gamma5)
    for i, a_i in enumerate(basis.alphas, 1):
        record(f"gamma5*alpha{i}*gamma5 = alpha{i}", basis.gamma5 @ a_i @ basis.gamma5, a_i)
    return AlgebraReport(checks=checks)


def hamiltonian(p: ThreeVector, m_s: float, momentum_sign: int = 1,
                basis: MatrixBasis = BASIS) -> HamiltonianMatrix:
    """s (alpha . p) + beta_s m_s; s = +1 antineutrino, s = -1 neutrino equation."""
    if not m_s > 0:
        raise DomainError(f"m_s must be positive, got {m_s}")
    if momentum_sign not in (1, -1):
        raise DomainError(f"momentum_sign must be +1 or -1, got {momentum_sign}")
    a1, a2, a3 = basis.alphas
    matrix = momentum_sign * (a1 * p.x + a2 * p.y + a3 * p.z) + basis.beta_s * m_s
    return HamiltonianMatrix(matrix=_frozen(matrix), p=p, m_s=m_s, momentum_sign=momentum_sign)


def mode_hamiltonians(k: np.ndarray, m_s: float, momentum_sign: int = 1) -> np.ndarray:
    """Stack of 1D Hamiltonians s k alpha3 + beta_s m_s, shape (len(k), 4, 4)."""
    k = np.asarray(k, dtype=float)
    return momentum_sign * k[:, None, None] * BASIS.alpha3 + m_s * BASIS.beta_s


def exact_propagators(omega_sq: np.ndarray, H: np.ndarray, dt: float) -> np.ndarray:
    """
    exp(-i H dt) for a stack of matrices with H^2 = omega_sq I:
    cos(w dt) I - i H sin(w dt)/w, continued to cosh/sinh for omega_sq < 0.
    """
    omega_sq = np.asarray(omega_sq, dtype=float)
    cos_part = np.empty_like(omega_sq)
    sin_part = np.empty_like(omega_sq)

    real = omega_sq >= 0
    w = np.sqrt(omega_sq[real])
    cos_part[real] = np.cos(w * dt)
    sin_part[real] = dt * np.sinc(w * dt / np.pi)

    kappa = np.sqrt(-omega_sq[~real])
    cos_part[~real] = np.cosh(kappa * dt)
    sin_part[~real] = np.sinh(kappa * dt) / kappa

    eye = np.eye(H.shape[-1], dtype=complex)
    return cos_part[:, None, None] * eye - 1j * sin_part[:, None, None] * H


# Helicity frames
# ==============================================================================

def _angles(n: ThreeVector) -> Tuple[float, float]:
    unit = n.unit_vector()
    theta = float(np.arccos(np.clip(unit.z, -1.0, 1.0)))
    phi = float(np.arctan2(unit.y, unit.x))
    return theta, phi


def helicity_basis(n: ThreeVector) -> Tuple[np.ndarray, np.ndarray]:
    """Two-spinors h+ and h- with (sigma . n) h+- = +-h+-."""
    theta, phi = _angles(n)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    h_up = np.array([c, np.exp(1j * phi) * s], dtype=complex)
    h_down = np.array([-np.exp(-1j * phi) * s, c], dtype=complex)
    return h_up, h_down


def spin_rotation(n: ThreeVector) -> np.ndarray:
    """Block-diagonal SU(2) rotation taking z to n on both two-spinors."""
    h_up, h_down = helicity_basis(n)
    R = np.column_stack([h_up, h_down])
    return _block(R, Z2, Z2, R)


def helicity_operator(n: ThreeVector) -> np.ndarray:
    """diag(sigma . n, sigma . n)."""
    unit = n.unit_vector()
    s = SIGMA_1 * unit.x + SIGMA_2 * unit.y + SIGMA_3 * unit.z
    return _block(s, Z2, Z2, s)


# Eigenproblem
# ==============================================================================

def helicity_pair(q: float, m_s: float, energy: complex) -> Tuple[complex, complex]:
    """
    (a, b) with E a = (q + m) b and E b = (q - m) a: the (phi, chi)
    amplitudes within one helicity channel, where q = s * helicity * |p|.
    Scaled so the larger propagating component is 1.
    """
    if energy == 0:
        # Threshold kernel: q = +m keeps phi, q = -m keeps chi.
        return (1.0, 0.0) if q > 0 else (0.0, 1.0)
    if isinstance(energy, complex) and energy.imag != 0:
        a, b = q + m_s, energy
        scale = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
        return a / scale, b / scale
    if q > 0:
        return 1.0, (q - m_s) / energy
    return (q + m_s) / energy, 1.0


def _closed_form(H: HamiltonianMatrix) -> List[EigenPair]:
    p_abs = H.p.norm()
    m = H.m_s
    direction = H.p if p_abs > 0 else ThreeVector(0.0, 0.0, 1.0)
    S = spin_rotation(direction)
    omega_sq = (p_abs - m) * (p_abs + m)

    if abs(p_abs - m) <= 1e-12 * m:
        energies = [0.0]
    elif omega_sq > 0:
        root = np.sqrt(omega_sq)
        energies = [root, -root]
    else:
        root = np.sqrt(-omega_sq)
        energies = [1j * root, -1j * root]

    pairs: List[EigenPair] = []
    for energy in energies:
        for helicity in (1, -1):
            q = H.momentum_sign * helicity * p_abs
            a, b = helicity_pair(q, m, energy)
            slot = 0 if helicity == 1 else 1
            z_vector = np.zeros(4, dtype=complex)
            z_vector[slot], z_vector[2 + slot] = a, b
            pairs.append(EigenPair(eigenvalue=complex(energy), eigenvector=Bispinor(S @ z_vector),
                                   helicity=helicity if p_abs > 0 else None))
    return pairs


def _numeric(H: HamiltonianMatrix) -> List[EigenPair]:
    values, vectors = np.linalg.eig(H.matrix)
    order = np.lexsort((values.imag, -values.real))
    return [EigenPair(eigenvalue=complex(values[i]), eigenvector=Bispinor(vectors[:, i])) for i in order]


def eigen_solve(H: HamiltonianMatrix, method: str = "closed") -> List[EigenPair]:
    """
    Eigenpairs of H. The closed form works per helicity channel and returns
    four pairs, or the two-dimensional kernel at the threshold |p| = m_s
    where H is defective. `method="numeric"` uses numpy's general solver.
    """
    solvers = {"closed": _closed_form, "numeric": _numeric}
    if method not in solvers:
        raise DomainError(f"Unknown eigen-solver {method!r}; choose from {sorted(solvers)}")
    return solvers[method](H)


def characteristic_value(H: HamiltonianMatrix, lam: complex) -> complex:
    """det(H - lam I)."""
    return complex(np.linalg.det(H.matrix - lam * np.eye(4)))
