"""
Core data structures for the spacelike Dirac toolkit.

All values are immutable and expressed in natural units (c = hbar = 1):
energies, masses and momenta in eV, speeds in units of c.
"""

from typing import Any, Dict, List, Optional
from dataclasses import dataclass, field, replace
from enum import Enum
import math
import numpy as np
from dataclasses_json import dataclass_json

from .errors import DomainError, InvalidBoostError

PREFERRED_FRAME = "sigma"

# Construction-time guard on mass-shell relations; property tests hold 1e-10.
SHELL_TOLERANCE = 1e-8


class Regime(Enum):
    """Where a momentum sits relative to m_s c."""
    PROPAGATING = "propagating"    # |p| > m_s c, real E
    THRESHOLD = "threshold"        # |p| = m_s c, E = 0
    EVANESCENT = "evanescent"      # |p| < m_s c, imaginary E


class Species(Enum):
    """Which wave equation a state solves."""
    NEUTRINO = "nu"                # minus sign on the momentum operator
    ANTINEUTRINO = "nubar"

    @property
    def momentum_sign(self) -> int:
        return -1 if self is Species.NEUTRINO else 1

    @property
    def physical_helicity(self) -> int:
        """Helicity of the only E > 0, rho > 0 solution."""
        return -1 if self is Species.NEUTRINO else 1

    @classmethod
    def from_momentum_sign(cls, sign: int) -> "Species":
        if sign not in (1, -1):
            raise DomainError(f"momentum_sign must be +1 or -1, got {sign}")
        return cls.NEUTRINO if sign < 0 else cls.ANTINEUTRINO


class Branch(Enum):
    """Plane-wave branch labelled by (helicity, energy sign)."""
    PSI1 = "psi1"    # up, E > 0
    PSI2 = "psi2"    # down, E > 0
    PSI3 = "psi3"    # up, E < 0
    PSI4 = "psi4"    # down, E < 0

    @property
    def helicity(self) -> int:
        return 1 if self in (Branch.PSI1, Branch.PSI3) else -1

    @property
    def energy_sign(self) -> int:
        return 1 if self in (Branch.PSI1, Branch.PSI2) else -1

    @classmethod
    def from_labels(cls, helicity: int, energy_sign: int) -> "Branch":
        table = {
            (1, 1): cls.PSI1,
            (-1, 1): cls.PSI2,
            (1, -1): cls.PSI3,
            (-1, -1): cls.PSI4,
        }
        try:
            return table[(helicity, energy_sign)]
        except KeyError:
            raise DomainError(f"No branch with helicity={helicity}, energy_sign={energy_sign}")


class Representation(Enum):
    """Component layout of a four-spinor field."""
    DIRAC = "dirac"    # (phi1, phi2, chi1, chi2)
    WEYL = "weyl"      # (xi1, xi2, eta1, eta2)


class Integrator(Enum):
    SPECTRAL = "spectral"
    RK4 = "rk4"


class EvanescentPolicy(Enum):
    """What the evolution engine does with |k| < m_s modes."""
    WARN = "warn"          # evolve faithfully, log once
    PROJECT = "project"    # remove them before every step
    FAIL = "fail"          # refuse to evolve them


@dataclass_json
@dataclass(frozen=True)
class ThreeVector:
    """Spatial vector; positions, momenta (eV) or velocities (units of c)."""
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, values: Any) -> "ThreeVector":
        arr = np.asarray(values, dtype=float).reshape(3)
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def as_list(self) -> List[float]:
        return [self.x, self.y, self.z]

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def dot(self, other: "ThreeVector") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def unit_vector(self) -> "ThreeVector":
        n = self.norm()
        if n == 0.0:
            raise DomainError("Zero vector has no direction")
        return ThreeVector(self.x / n, self.y / n, self.z / n)

    def scaled(self, factor: float) -> "ThreeVector":
        return ThreeVector(self.x * factor, self.y * factor, self.z * factor)

    def __add__(self, other: "ThreeVector") -> "ThreeVector":
        return ThreeVector(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "ThreeVector") -> "ThreeVector":
        return ThreeVector(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "ThreeVector":
        return ThreeVector(-self.x, -self.y, -self.z)


@dataclass_json
@dataclass(frozen=True)
class BoostVelocity:
    """Subluminal frame velocity in units of c."""
    v: ThreeVector

    def __post_init__(self):
        speed = self.v.norm()
        if not speed < 1.0:
            raise InvalidBoostError(f"Boost speed must be below c, got |v| = {speed}")

    @classmethod
    def of(cls, vx: float, vy: float = 0.0, vz: float = 0.0) -> "BoostVelocity":
        return cls(ThreeVector(vx, vy, vz))

    @property
    def speed(self) -> float:
        return self.v.norm()

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.v.dot(self.v))

    def tag(self) -> str:
        return f"({self.v.x!r},{self.v.y!r},{self.v.z!r})"


@dataclass_json
@dataclass(frozen=True)
class Event:
    """
    Spacetime point in the coordinates of one frame.

    `ggt_velocity` is set when `t` holds GGT time of a frame moving with that
    velocity relative to the preferred frame; the line element then takes the
    GGT form.
    """
    t: float
    r: ThreeVector = field(default_factory=ThreeVector)
    frame_tag: str = PREFERRED_FRAME
    ggt_velocity: Optional[ThreeVector] = None

    @property
    def is_ggt(self) -> bool:
        return self.ggt_velocity is not None

    @property
    def in_preferred_frame(self) -> bool:
        return self.frame_tag == PREFERRED_FRAME


@dataclass_json
@dataclass(frozen=True)
class SpacelikeFourMomentum:
    """(E, p, m_s) on the shell |p|^2 - E^2 = m_s^2; E may be negative off Sigma."""
    E: float
    p: ThreeVector
    m_s: float

    def __post_init__(self):
        if not self.m_s > 0:
            raise DomainError(f"m_s must be positive, got {self.m_s}")
        defect = self.invariant_defect()
        if defect > SHELL_TOLERANCE:
            raise DomainError(f"Off the spacelike mass shell (relative defect {defect:.3e})")

    def invariant(self) -> float:
        """|p|^2 - E^2, equal to m_s^2 on shell."""
        return self.p.dot(self.p) - self.E * self.E

    def invariant_defect(self) -> float:
        scale = max(self.p.dot(self.p), self.E * self.E, self.m_s * self.m_s)
        return abs(self.invariant() - self.m_s * self.m_s) / scale


@dataclass_json
@dataclass(frozen=True)
class TimelikeFourMomentum:
    """(E, p, m_o) on the shell E^2 - |p|^2 = m_o^2."""
    E: float
    p: ThreeVector
    m_o: float

    def __post_init__(self):
        if not self.m_o > 0:
            raise DomainError(f"m_o must be positive, got {self.m_o}")
        if not self.E > 0:
            raise DomainError(f"Timelike energy must be positive, got {self.E}")
        defect = self.invariant_defect()
        if defect > SHELL_TOLERANCE:
            raise DomainError(f"Off the timelike mass shell (relative defect {defect:.3e})")

    def invariant(self) -> float:
        return self.E * self.E - self.p.dot(self.p)

    def invariant_defect(self) -> float:
        scale = max(self.p.dot(self.p), self.E * self.E, self.m_o * self.m_o)
        return abs(self.invariant() - self.m_o * self.m_o) / scale


@dataclass(frozen=True, eq=False)
class Bispinor:
    """Four complex amplitudes (phi1, phi2, chi1, chi2)."""
    components: np.ndarray

    def __post_init__(self):
        arr = np.array(self.components, dtype=complex).reshape(4)
        if not np.all(np.isfinite(arr)):
            raise DomainError("Bispinor components must be finite")
        if not np.any(arr):
            raise DomainError("Bispinor must not vanish")
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)

    @classmethod
    def of(cls, *values: complex) -> "Bispinor":
        return cls(np.array(values, dtype=complex))

    @property
    def phi(self) -> np.ndarray:
        return self.components[:2]

    @property
    def chi(self) -> np.ndarray:
        return self.components[2:]

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def normalized(self) -> "Bispinor":
        return Bispinor(self.components / self.norm())

    def as_pairs(self) -> List[List[float]]:
        """Components as [re, im] pairs for JSON."""
        return [[float(c.real), float(c.imag)] for c in self.components]


@dataclass(frozen=True, eq=False)
class PlaneWaveSolution:
    """Closed-form plane wave along z with its branch labels and normalization factors."""
    p: float
    m_s: float
    E: float
    helicity: int
    energy_sign: int
    species: Species
    bispinor: Bispinor
    A: float
    N: float

    @property
    def momentum_sign(self) -> int:
        return self.species.momentum_sign

    @property
    def branch(self) -> Branch:
        return Branch.from_labels(self.helicity, self.energy_sign)


@dataclass(frozen=True, eq=False)
class WeylPair:
    """(xi, eta) = ((phi + chi)/sqrt2, (phi - chi)/sqrt2)."""
    xi: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        for name in ("xi", "eta"):
            arr = np.array(getattr(self, name), dtype=complex).reshape(2)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def norm_squared(self) -> float:
        return float(np.vdot(self.xi, self.xi).real + np.vdot(self.eta, self.eta).real)


@dataclass_json
@dataclass(frozen=True)
class Grid1D:
    """Periodic lattice of n_points sites spaced dz (hbar*c/eV)."""
    n_points: int
    dz: float
    boundary: str = "periodic"

    def __post_init__(self):
        n = self.n_points
        if n < 8 or n & (n - 1):
            raise DomainError(f"n_points must be a power of two >= 8, got {n}")
        if not (self.dz > 0 and math.isfinite(self.dz)):
            raise DomainError(f"dz must be positive and finite, got {self.dz}")
        if self.boundary != "periodic":
            raise DomainError(f"Only periodic boundaries are supported, got {self.boundary!r}")

    @property
    def length(self) -> float:
        return self.n_points * self.dz

    def positions(self) -> np.ndarray:
        return np.arange(self.n_points) * self.dz

    def wavenumbers(self) -> np.ndarray:
        """k_m = 2 pi m / (n dz) in FFT ordering, m in [-n/2, n/2)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dz)

    def wavenumber(self, mode_index: int) -> float:
        return 2.0 * np.pi * mode_index / self.length

    def fft_slot(self, mode_index: int) -> int:
        half = self.n_points // 2
        if not -half <= mode_index < half:
            raise DomainError(f"mode_index must lie in [{-half}, {half}), got {mode_index}")
        return mode_index % self.n_points


@dataclass(frozen=True, eq=False)
class FieldState:
    """Four-component field Psi(z, t) on a periodic lattice."""
    grid: Grid1D
    time: float
    values: np.ndarray
    m_s: float
    momentum_sign: int = 1
    representation: Representation = Representation.DIRAC

    def __post_init__(self):
        arr = np.array(self.values, dtype=complex)
        if arr.shape != (self.grid.n_points, 4):
            raise DomainError(f"values must have shape ({self.grid.n_points}, 4), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("Field values must be finite")
        if not self.m_s >= 0:
            raise DomainError(f"m_s must be non-negative, got {self.m_s}")
        if self.momentum_sign not in (1, -1):
            raise DomainError(f"momentum_sign must be +1 or -1, got {self.momentum_sign}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def evolved(self, values: np.ndarray, time: float) -> "FieldState":
        return replace(self, values=values, time=time)

    def same_lattice(self, other: "FieldState") -> bool:
        return (self.grid == other.grid
                and self.m_s == other.m_s
                and self.momentum_sign == other.momentum_sign
                and self.representation == other.representation)

    def to_snapshot(self) -> Dict[str, Any]:
        """JSON-ready dump: grid metadata plus re/im component arrays."""
        return {
            "grid": self.grid.to_dict(),
            "time": self.time,
            "m_s": self.m_s,
            "momentum_sign": self.momentum_sign,
            "representation": self.representation.value,
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }

    @classmethod
    def from_snapshot(cls, data: Dict[str, Any]) -> "FieldState":
        values = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        return cls(
            grid=Grid1D.from_dict(data["grid"]),
            time=float(data["time"]),
            values=values,
            m_s=float(data["m_s"]),
            momentum_sign=int(data["momentum_sign"]),
            representation=Representation(data["representation"]),
        )


