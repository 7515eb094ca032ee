"""
Evolution Engine: 1+1D lattice dynamics of the spacelike Dirac-type equation.

Fields live on a periodic grid along z. The spectral integrator applies the
exact per-mode propagator exp(-i H(k) dt); rk4 is a finite-difference
cross-check. Evanescent modes (|k| < m_s) grow or decay exponentially and
are handled by a configurable policy.
"""

from typing import Callable, Dict, Iterator, List, Optional, Tuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging
import math
import numpy as np
from dataclasses_json import dataclass_json

from .core import (
    Branch,
    Bispinor,
    EvanescentPolicy,
    FieldState,
    Grid1D,
    Integrator,
    Representation,
    Species,
)
from .errors import DomainError, EvanescentBlowupError, GridMismatchError, StabilityError
from .planewave import plane_wave, z_axis_bispinor
from .spinor_algebra import BASIS, exact_propagators, mode_hamiltonians
from .weyl import weyl_density_current_field, weyl_mode_hamiltonians, weyl_rhs

Derivative = Callable[[np.ndarray], np.ndarray]

DEFAULT_AMPLITUDE_CAP = 1e12
DEFAULT_EVANESCENT_TOLERANCE = 1e-12

# Central-difference weights c_m in D f_j = sum_m c_m (f_{j+m} - f_{j-m}) / dz
STENCILS: Dict[int, Tuple[float, ...]] = {
    2: (1.0 / 2.0,),
    4: (2.0 / 3.0, -1.0 / 12.0),
    6: (3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0),
}

_ALPHA_Z_T = BASIS.alpha3.T
_BETA_S_T = BASIS.beta_s.T


@dataclass_json
@dataclass(frozen=True)
class EvolutionConfig:
    """Run parameters; dt in hbar/eV."""
    integrator: Integrator = Integrator.SPECTRAL
    dt: float = 1e-3
    steps: int = 100
    evanescent_policy: EvanescentPolicy = EvanescentPolicy.WARN
    amplitude_cap: float = DEFAULT_AMPLITUDE_CAP
    evanescent_tolerance: float = DEFAULT_EVANESCENT_TOLERANCE
    cfl: float = 1.0
    stencil_order: int = 4
    workers: int = 1
    report_every: int = 1

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise DomainError(f"dt must be positive and finite, got {self.dt}")
        if self.steps < 0:
            raise DomainError(f"steps must be non-negative, got {self.steps}")
        if self.stencil_order not in STENCILS:
            raise DomainError(f"stencil_order must be one of {sorted(STENCILS)}, got {self.stencil_order}")
        if self.workers < 1:
            raise DomainError(f"workers must be at least 1, got {self.workers}")
        if self.report_every < 1:
            raise DomainError(f"report_every must be at least 1, got {self.report_every}")
        if not self.amplitude_cap > 0:
            raise DomainError(f"amplitude_cap must be positive, got {self.amplitude_cap}")
        if not self.cfl > 0:
            raise DomainError(f"cfl must be positive, got {self.cfl}")


@dataclass_json
@dataclass(frozen=True)
class EvolutionStep:
    """One report row."""
    step: int
    time: float
    charge: float
    norm: float
    continuity_residual: float
    max_evanescent_amp: float
    centroid: Optional[float] = None


@dataclass
class EvolutionReport:
    config: EvolutionConfig
    grid: Grid1D
    m_s: float
    momentum_sign: int
    representation: Representation
    rows: List[EvolutionStep] = field(default_factory=list)
    initial_evanescent_fraction: float = 0.0
    final_state: Optional[FieldState] = None

    @property
    def steps_taken(self) -> int:
        return self.rows[-1].step if self.rows else 0

    def max_charge_drift(self) -> float:
        """max |Q(t) - Q(0)| relative to |Q(0)| (or to the initial norm when Q(0) = 0)."""
        if not self.rows:
            return 0.0
        first = self.rows[0]
        scale = abs(first.charge) or first.norm or 1.0
        return max(abs(r.charge - first.charge) for r in self.rows) / scale

    def centroid_speed(self) -> Optional[float]:
        """Least-squares slope of the charge centroid against time."""
        points = [(r.time, r.centroid) for r in self.rows if r.centroid is not None]
        if len(points) < 2:
            return None
        t, z = np.array(points).T
        slope, _ = np.polyfit(t, z, 1)
        return float(slope)


# State construction
# ==============================================================================

def _mode_field(grid: Grid1D, k: float, spinor: np.ndarray, amplitude: complex = 1.0) -> np.ndarray:
    phase = np.exp(1j * k * grid.positions())
    return amplitude * phase[:, None] * spinor[None, :]


def init_plane_wave(grid: Grid1D, mode_index: int, branch: Branch, m_s: float,
                    momentum_sign: int = 1) -> FieldState:
    """bispinor(k) exp(ikz) on the grid; a single nonzero Fourier mode."""
    grid.fft_slot(mode_index)
    k = grid.wavenumber(mode_index)
    solution = plane_wave(k, m_s, branch, Species.from_momentum_sign(momentum_sign))
    values = _mode_field(grid, k, solution.bispinor.components)
    return FieldState(grid=grid, time=0.0, values=values, m_s=m_s, momentum_sign=momentum_sign)


def init_mode(grid: Grid1D, mode_index: int, spinor: Bispinor, m_s: float,
              momentum_sign: int = 1, amplitude: complex = 1.0,
              representation: Representation = Representation.DIRAC) -> FieldState:
    """An arbitrary spinor in one Fourier mode; mode 0 gives a uniform field."""
    grid.fft_slot(mode_index)
    k = grid.wavenumber(mode_index)
    values = _mode_field(grid, k, spinor.components, amplitude)
    return FieldState(grid=grid, time=0.0, values=values, m_s=m_s,
                      momentum_sign=momentum_sign, representation=representation)


def init_gaussian_packet(grid: Grid1D, k0: float, width: float, branch: Branch, m_s: float,
                         momentum_sign: int = 1, center: Optional[float] = None) -> FieldState:
    """
    Gaussian packet of spatial width `width` around `center` (default L/4).
    Mode k gets weight exp(-(k - k0)^2 width^2 / 2) and the unit-normalised
    spinor of `branch` at k, continued to imaginary energy where |k| < m_s.
    The field is scaled to unit norm.
    """
    if not width > 0:
        raise DomainError(f"width must be positive, got {width}")
    center = grid.length / 4.0 if center is None else center
    k = grid.wavenumbers()
    weights = np.exp(-0.5 * ((k - k0) * width) ** 2) * np.exp(-1j * k * center)

    spectrum = np.zeros((grid.n_points, 4), dtype=complex)
    for slot in np.flatnonzero(np.abs(weights) > 0):
        spinor = z_axis_bispinor(float(k[slot]), m_s, momentum_sign, branch).normalized()
        spectrum[slot] = weights[slot] * spinor.components
    values = np.fft.ifft(spectrum, axis=0)
    values /= math.sqrt(np.sum(np.abs(values) ** 2) * grid.dz)

    state = FieldState(grid=grid, time=0.0, values=values, m_s=m_s, momentum_sign=momentum_sign)
    logging.info(f"Gaussian packet k0={k0}, width={width}: evanescent fraction {evanescent_fraction(state):.3e}")
    return state


def init_random(grid: Grid1D, rng: np.random.Generator, m_s: float, momentum_sign: int = 1,
                propagating_only: bool = False) -> FieldState:
    """Seeded complex Gaussian field, optionally stripped of evanescent modes."""
    shape = (grid.n_points, 4)
    values = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    state = FieldState(grid=grid, time=0.0, values=values, m_s=m_s, momentum_sign=momentum_sign)
    return project_propagating(state) if propagating_only else state


# Spatial operators
# ==============================================================================

def spectral_derivative(values: np.ndarray, grid: Grid1D) -> np.ndarray:
    k = grid.wavenumbers()
    return np.fft.ifft(1j * k[:, None] * np.fft.fft(values, axis=0), axis=0)


def finite_difference_derivative(values: np.ndarray, dz: float, order: int = 4) -> np.ndarray:
    """Periodic central difference of the given order along axis 0."""
    if order not in STENCILS:
        raise DomainError(f"stencil order must be one of {sorted(STENCILS)}, got {order}")
    result = np.zeros_like(values)
    for shift, weight in enumerate(STENCILS[order], start=1):
        result += weight * (np.roll(values, -shift, axis=0) - np.roll(values, shift, axis=0))
    return result / dz


def derivative_operator(grid: Grid1D, order: Optional[int] = None) -> Derivative:
    """d/dz on the grid: spectral when order is None, else finite difference."""
    if order is None:
        return lambda values: spectral_derivative(values, grid)
    return lambda values: finite_difference_derivative(values, grid.dz, order)


def dirac_rhs(values: np.ndarray, m_s: float, derivative: Derivative, momentum_sign: int = 1) -> np.ndarray:
    """dPsi/dt = -s alpha_z dPsi/dz - i m_s beta_s Psi for (n, 4) row-vector fields."""
    return -momentum_sign * (derivative(values) @ _ALPHA_Z_T) - 1j * m_s * (values @ _BETA_S_T)


def _rhs(state: FieldState, derivative: Derivative) -> Callable[[np.ndarray], np.ndarray]:
    rhs = weyl_rhs if state.representation is Representation.WEYL else dirac_rhs
    return lambda values: rhs(values, state.m_s, derivative, state.momentum_sign)


# Diagnostics
# ==============================================================================

def density_current_field(state: FieldState) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-site rho = Psi^dagger gamma5 Psi and the conserved current
    j_z = s Psi^dagger gamma5 alpha_z Psi of the state's equation.
    """
    if state.representation is Representation.WEYL:
        rho, j_z = weyl_density_current_field(state.values)
        return rho, state.momentum_sign * j_z
    phi, chi = state.values[:, :2], state.values[:, 2:]
    rho = 2.0 * np.sum(phi.conj() * chi, axis=1).real
    sq = np.abs(phi) ** 2 + np.abs(chi) ** 2
    return rho, state.momentum_sign * (sq[:, 0] - sq[:, 1])


def charge(state: FieldState) -> float:
    rho, _ = density_current_field(state)
    return float(np.sum(rho) * state.grid.dz)


def norm(state: FieldState) -> float:
    """sum Psi^dagger Psi dz; not conserved when evanescent modes are present."""
    return float(np.sum(np.abs(state.values) ** 2) * state.grid.dz)


def centroid(state: FieldState) -> Optional[float]:
    """sum z rho / sum rho, or None for a field with zero charge."""
    rho, _ = density_current_field(state)
    total = np.sum(rho)
    if total == 0.0:
        return None
    return float(np.sum(state.grid.positions() * rho) / total)


def continuity_residual(before: FieldState, after: FieldState) -> float:
    """max_z |(rho_after - rho_before)/dt + d j_mid/dz| with a central divergence."""
    if not before.same_lattice(after):
        raise GridMismatchError("continuity_residual needs two states on the same lattice")
    dt = after.time - before.time
    if dt == 0.0:
        raise DomainError("continuity_residual needs states at different times")
    rho_b, j_b = density_current_field(before)
    rho_a, j_a = density_current_field(after)
    j_mid = 0.5 * (j_a + j_b)
    div = (np.roll(j_mid, -1) - np.roll(j_mid, 1)) / (2.0 * before.grid.dz)
    return float(np.max(np.abs((rho_a - rho_b) / dt + div)))


def evanescent_mask(grid: Grid1D, m_s: float) -> np.ndarray:
    return np.abs(grid.wavenumbers()) < m_s


def _signed_modes(grid: Grid1D, slots: np.ndarray) -> List[int]:
    n = grid.n_points
    return [int(s) if s < n // 2 else int(s) - n for s in slots]


def evanescent_amplitude(state: FieldState) -> float:
    """Largest per-site amplitude ||Psi_k|| / n among modes with |k| < m_s."""
    mask = evanescent_mask(state.grid, state.m_s)
    if not np.any(mask):
        return 0.0
    spectrum = np.fft.fft(state.values, axis=0)
    return float(np.max(np.linalg.norm(spectrum[mask], axis=1)) / state.grid.n_points)


def evanescent_fraction(state: FieldState) -> float:
    """Share of sum ||Psi_k||^2 carried by |k| < m_s modes."""
    power = np.sum(np.abs(np.fft.fft(state.values, axis=0)) ** 2, axis=1)
    total = np.sum(power)
    if total == 0.0:
        return 0.0
    return float(np.sum(power[evanescent_mask(state.grid, state.m_s)]) / total)


def evanescent_modes(state: FieldState, tolerance: float = DEFAULT_EVANESCENT_TOLERANCE) -> List[int]:
    """Signed indices of |k| < m_s modes whose amplitude exceeds tolerance."""
    spectrum = np.fft.fft(state.values, axis=0)
    amplitude = np.linalg.norm(spectrum, axis=1) / state.grid.n_points
    slots = np.flatnonzero(evanescent_mask(state.grid, state.m_s) & (amplitude > tolerance))
    return _signed_modes(state.grid, slots)


def project_propagating(state: FieldState) -> FieldState:
    """Zero every Fourier mode with |k| < m_s; idempotent."""
    mask = evanescent_mask(state.grid, state.m_s)
    if not np.any(mask):
        return state
    spectrum = np.fft.fft(state.values, axis=0)
    spectrum[mask] = 0.0
    return state.evolved(np.fft.ifft(spectrum, axis=0), state.time)


# Integrators
# ==============================================================================

def _apply(propagators: np.ndarray, spectrum: np.ndarray) -> np.ndarray:
    return np.matmul(propagators, spectrum[..., None])[..., 0]


def step_spectral(state: FieldState, dt: float, amplitude_cap: float = DEFAULT_AMPLITUDE_CAP,
                  workers: int = 1) -> FieldState:
    """
    Advance every mode by exp(-i H(k) dt), exact for any dt. Modes are
    independent, so with workers > 1 they are split into contiguous chunks
    and reassembled in slot order.
    """
    grid = state.grid
    k = grid.wavenumbers()
    builder = weyl_mode_hamiltonians if state.representation is Representation.WEYL else mode_hamiltonians
    propagators = exact_propagators(k * k - state.m_s * state.m_s,
                                    builder(k, state.m_s, state.momentum_sign), dt)
    spectrum = np.fft.fft(state.values, axis=0)

    if workers > 1:
        chunks = np.array_split(np.arange(grid.n_points), workers)
        advanced = np.empty_like(spectrum)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(lambda idx: _apply(propagators[idx], spectrum[idx]), chunks)
            for idx, block in zip(chunks, results):
                advanced[idx] = block
    else:
        advanced = _apply(propagators, spectrum)

    amplitude = np.linalg.norm(advanced, axis=1) / grid.n_points
    over = np.flatnonzero(~(amplitude <= amplitude_cap))
    if over.size:
        modes = _signed_modes(grid, over)
        raise EvanescentBlowupError(
            f"Mode amplitude exceeded cap {amplitude_cap:.3e} at t={state.time + dt} (modes {modes})", modes
        )
    return state.evolved(np.fft.ifft(advanced, axis=0), state.time + dt)


def step_rk4(state: FieldState, dt: float, cfl: float = 1.0, order: int = 4) -> FieldState:
    """Classical fourth-order Runge-Kutta on a central-difference stencil."""
    bound = cfl * state.grid.dz
    if dt > bound:
        raise StabilityError(f"dt = {dt} exceeds the CFL bound {bound} (cfl={cfl}, dz={state.grid.dz})")
    f = _rhs(state, derivative_operator(state.grid, order))
    y = state.values
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return state.evolved(y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), state.time + dt)


class EvolutionEngine:
    """
    Runs a configured integrator over a field state, applying the evanescent
    policy and recording one report row every `report_every` steps.
    """

    def __init__(self, config: Optional[EvolutionConfig] = None):
        self.config = config or EvolutionConfig()
        self.integrators = {
            Integrator.SPECTRAL: self._spectral,
            Integrator.RK4: self._rk4,
        }
        self.policies = {
            EvanescentPolicy.WARN: self._warn,
            EvanescentPolicy.PROJECT: self._project,
            EvanescentPolicy.FAIL: self._fail,
        }
        self._warned = False
        logging.info(
            f"Evolution engine initialized ({self.config.integrator.value}, dt={self.config.dt}, "
            f"policy={self.config.evanescent_policy.value})"
        )

    def _spectral(self, state: FieldState) -> FieldState:
        return step_spectral(state, self.config.dt, self.config.amplitude_cap, self.config.workers)

    def _rk4(self, state: FieldState) -> FieldState:
        after = step_rk4(state, self.config.dt, self.config.cfl, self.config.stencil_order)
        amplitude = evanescent_amplitude(after)
        if not amplitude <= self.config.amplitude_cap:
            modes = evanescent_modes(after, self.config.amplitude_cap)
            raise EvanescentBlowupError(f"Evanescent amplitude {amplitude:.3e} exceeded cap", modes)
        return after

    def _warn(self, state: FieldState) -> FieldState:
        if not self._warned and evanescent_amplitude(state) > self.config.evanescent_tolerance:
            self._warned = True
            logging.warning(
                f"State carries evanescent modes {evanescent_modes(state, self.config.evanescent_tolerance)}; "
                f"they will grow as exp(sqrt(m_s^2 - k^2) t)"
            )
        return state

    def _project(self, state: FieldState) -> FieldState:
        amplitude = evanescent_amplitude(state)
        if amplitude > self.config.evanescent_tolerance:
            logging.debug(f"Projecting out evanescent content (amplitude {amplitude:.3e}) at t={state.time}")
        return project_propagating(state)

    def _fail(self, state: FieldState) -> FieldState:
        modes = evanescent_modes(state, self.config.evanescent_tolerance)
        if modes:
            raise EvanescentBlowupError(
                f"Evanescent policy 'fail': modes {modes} carry amplitude above "
                f"{self.config.evanescent_tolerance:.1e}", modes
            )
        return state

    def prepare(self, state: FieldState) -> FieldState:
        return self.policies[self.config.evanescent_policy](state)

    def step(self, state: FieldState) -> FieldState:
        return self.integrators[self.config.integrator](self.prepare(state))

    def _row(self, step: int, state: FieldState, residual: float) -> EvolutionStep:
        return EvolutionStep(
            step=step,
            time=state.time,
            charge=charge(state),
            norm=norm(state),
            continuity_residual=residual,
            max_evanescent_amp=evanescent_amplitude(state),
            centroid=centroid(state),
        )

    def iter_run(self, state: FieldState) -> Iterator[Tuple[EvolutionStep, FieldState]]:
        """Yield (row, state) at step 0, every report_every steps and the last step."""
        cfg = self.config
        self._warned = False
        logging.info(
            f"Evolving {cfg.steps} steps on {state.grid.n_points} sites (dz={state.grid.dz}, m_s={state.m_s})"
        )
        current = self.prepare(state)
        yield self._row(0, current, 0.0), current

        for n in range(1, cfg.steps + 1):
            before = self.prepare(current)
            current = self.integrators[cfg.integrator](before)
            if n % cfg.report_every == 0 or n == cfg.steps:
                row = self._row(n, current, continuity_residual(before, current))
                yield row, current

        logging.info(f"Evolution finished at t={current.time}")

    def new_report(self, state: FieldState) -> EvolutionReport:
        return EvolutionReport(
            config=self.config,
            grid=state.grid,
            m_s=state.m_s,
            momentum_sign=state.momentum_sign,
            representation=state.representation,
            initial_evanescent_fraction=evanescent_fraction(state),
        )

    def run(self, state: FieldState) -> EvolutionReport:
        report = self.new_report(state)
        for row, current in self.iter_run(state):
            report.rows.append(row)
            report.final_state = current
        return report
