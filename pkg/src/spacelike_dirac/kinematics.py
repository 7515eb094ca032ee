"""
Kinematics: GGT and Lorentz frame maps, tachyonic dispersion, four-momenta,
asymptotic limits in non-preferred frames and the helicity-flip threshold.

Natural units throughout (c = 1). GGT is defined from the preferred frame
Sigma to a moving frame S; transfers between two moving frames go through
Sigma.
"""

from typing import Optional, Tuple, Union
from dataclasses import dataclass
from enum import Enum
import math
from dataclasses_json import dataclass_json

from .core import (
    PREFERRED_FRAME,
    BoostVelocity,
    Event,
    Regime,
    SpacelikeFourMomentum,
    ThreeVector,
    TimelikeFourMomentum,
)
from .errors import DomainError, FrameMismatchError

# |p| within this relative distance of m_s counts as the E = 0 threshold
THRESHOLD_TOLERANCE = 1e-12
LIGHTLIKE_TOLERANCE = 1e-12
UNIT_TOLERANCE = 1e-9


class IntervalKind(Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"


@dataclass_json
@dataclass(frozen=True)
class Dispersion:
    """Energies allowed by |p|^2 - E^2 = m_s^2 at one momentum."""
    p: float
    m_s: float
    regime: Regime
    E_plus: Optional[float] = None
    E_minus: Optional[float] = None
    kappa: Optional[float] = None      # |Im E| in the evanescent regime


@dataclass_json
@dataclass(frozen=True)
class AsymptoticLimits:
    """Lowest momentum and energy reached as the speed in S goes to infinity."""
    p_inf: ThreeVector
    E_inf: float


@dataclass_json
@dataclass(frozen=True)
class GGTMomentum:
    """Covariant energy-momentum in the GGT coordinates of a moving frame."""
    energy: float
    momentum: ThreeVector
    velocity: ThreeVector


def _require_unit(n: ThreeVector, name: str = "n") -> ThreeVector:
    if abs(n.norm() - 1.0) > UNIT_TOLERANCE:
        raise DomainError(f"{name} must be a unit vector, got |{name}| = {n.norm()}")
    return n


def ggt_frame_tag(v: BoostVelocity) -> str:
    return f"{PREFERRED_FRAME}>ggt{v.tag()}"


def lorentz_frame_tag(parent: str, v: BoostVelocity) -> str:
    return f"{parent}>lt{v.tag()}"


def _boost_position(r: ThreeVector, t: float, v: BoostVelocity) -> ThreeVector:
    """Longitudinal part -> gamma (r_par - |v| t); transverse part unchanged."""
    if v.speed == 0.0:
        return r
    n = v.v.unit_vector()
    r_par = r.dot(n)
    return r + n.scaled(v.gamma * (r_par - v.speed * t) - r_par)


# Frame maps
# ==============================================================================

def ggt_boost(e: Event, v: BoostVelocity) -> Event:
    """
    Generalized Galilean transformation from Sigma to S:
    x_par = gamma (X_par - v T), x_perp = X_perp, t~ = T / gamma.
    """
    if not e.in_preferred_frame or e.is_ggt:
        raise FrameMismatchError(f"GGT starts from the preferred frame, got frame {e.frame_tag!r}")
    return Event(
        t=e.t / v.gamma,
        r=_boost_position(e.r, e.t, v),
        frame_tag=ggt_frame_tag(v),
        ggt_velocity=v.v,
    )


def ggt_inverse(e: Event) -> Event:
    """Map GGT coordinates of S back to Sigma."""
    if not e.is_ggt:
        raise FrameMismatchError(f"Event is not in GGT coordinates (frame {e.frame_tag!r})")
    v = BoostVelocity(e.ggt_velocity)
    T = v.gamma * e.t
    if v.speed == 0.0:
        return Event(t=T, r=e.r)
    n = v.v.unit_vector()
    x_par = e.r.dot(n)
    X = e.r + n.scaled(x_par / v.gamma + v.speed * T - x_par)
    return Event(t=T, r=X)


def ggt_transfer(e: Event, v_to: BoostVelocity) -> Event:
    """Move an event into the GGT coordinates of another frame, through Sigma."""
    sigma_event = ggt_inverse(e) if e.is_ggt else e
    return ggt_boost(sigma_event, v_to)


def lorentz_boost(e: Event, v: BoostVelocity) -> Event:
    """Standard Lorentz boost of SR coordinates."""
    if e.is_ggt:
        raise FrameMismatchError("Convert GGT coordinates with ggt_to_sr_event before a Lorentz boost")
    t = v.gamma * (e.t - v.v.dot(e.r))
    return Event(t=t, r=_boost_position(e.r, e.t, v), frame_tag=lorentz_frame_tag(e.frame_tag, v))


def ggt_time_to_sr_time(dt_tilde: float, dr: ThreeVector, v: BoostVelocity) -> float:
    """SR time from GGT time: dt = dt~ - v . dr."""
    return dt_tilde - v.v.dot(dr)


def ggt_to_sr_event(e: Event) -> Event:
    """Re-express a GGT event in the SR coordinates of the same moving frame."""
    if not e.is_ggt:
        raise FrameMismatchError(f"Event is not in GGT coordinates (frame {e.frame_tag!r})")
    v = BoostVelocity(e.ggt_velocity)
    return Event(
        t=ggt_time_to_sr_time(e.t, e.r, v),
        r=e.r,
        frame_tag=lorentz_frame_tag(PREFERRED_FRAME, v),
    )


# Line element
# ==============================================================================

def line_element(dt: float, dr: ThreeVector, ggt_velocity: Optional[ThreeVector] = None) -> float:
    """
    ds^2 for a coordinate displacement; GGT displacements use
    (dt~ - v . dr)^2 - dr . dr.
    """
    if ggt_velocity is not None:
        dt = dt - ggt_velocity.dot(dr)
    return dt * dt - dr.dot(dr)


def interval(e1: Event, e2: Event) -> float:
    """c^2 dt^2 - |dr|^2 between two events of one frame."""
    if e1.frame_tag != e2.frame_tag:
        raise FrameMismatchError(f"Cannot mix frames {e1.frame_tag!r} and {e2.frame_tag!r}")
    return line_element(e2.t - e1.t, e2.r - e1.r, e1.ggt_velocity)


def classify_interval(s2: float, scale: float = 1.0) -> IntervalKind:
    if abs(s2) <= LIGHTLIKE_TOLERANCE * max(scale, 1.0):
        return IntervalKind.LIGHTLIKE
    return IntervalKind.TIMELIKE if s2 > 0 else IntervalKind.SPACELIKE


# Dispersion and speeds
# ==============================================================================

def dispersion_energy(p: Union[ThreeVector, float], m_s: float) -> Dispersion:
    """E_+- = +-sqrt(|p|^2 - m_s^2); |p| < m_s is classified, not fabricated."""
    if not m_s > 0:
        raise DomainError(f"m_s must be positive, got {m_s}")
    p_abs = p.norm() if isinstance(p, ThreeVector) else abs(float(p))

    if abs(p_abs - m_s) <= THRESHOLD_TOLERANCE * m_s:
        return Dispersion(p=p_abs, m_s=m_s, regime=Regime.THRESHOLD, E_plus=0.0, E_minus=0.0)
    if p_abs < m_s:
        kappa = math.sqrt((m_s - p_abs) * (m_s + p_abs))
        return Dispersion(p=p_abs, m_s=m_s, regime=Regime.EVANESCENT, kappa=kappa)

    energy = math.sqrt((p_abs - m_s) * (p_abs + m_s))
    return Dispersion(p=p_abs, m_s=m_s, regime=Regime.PROPAGATING, E_plus=energy, E_minus=-energy)


def speed_from_momentum(pm: SpacelikeFourMomentum) -> float:
    """u_s = |p| / E; returns math.inf at E = 0 (the infinite-speed state)."""
    if pm.E == 0.0:
        return math.inf
    return pm.p.norm() / pm.E


def spacelike_momentum_from_speed(u_s: float, n: ThreeVector, m_s: float) -> SpacelikeFourMomentum:
    """Preferred-frame four-momentum of a tachyon moving with speed u_s along n."""
    if not u_s > 1.0:
        raise DomainError(f"Spacelike speed must exceed c, got u_s = {u_s}")
    if not m_s > 0:
        raise DomainError(f"m_s must be positive, got {m_s}")
    _require_unit(n)
    if math.isinf(u_s):
        return SpacelikeFourMomentum(E=0.0, p=n.scaled(m_s), m_s=m_s)
    # sqrt(1 - 1/u_s^2) stays finite for any finite u_s
    inverse = 1.0 / u_s
    g = math.sqrt((1.0 - inverse) * (1.0 + inverse))
    return SpacelikeFourMomentum(E=m_s * inverse / g, p=n.scaled(m_s / g), m_s=m_s)


def timelike_four_momentum(u: float, n: ThreeVector, m_o: float) -> TimelikeFourMomentum:
    """Relativistic (E, p) of a subluminal particle."""
    if not 0.0 <= u < 1.0:
        raise DomainError(f"Timelike speed must lie in [0, 1), got u = {u}")
    if not m_o > 0:
        raise DomainError(f"m_o must be positive, got {m_o}")
    gamma = 1.0 / math.sqrt((1.0 - u) * (1.0 + u))
    p = ThreeVector() if u == 0.0 else _require_unit(n).scaled(gamma * m_o * u)
    return TimelikeFourMomentum(E=gamma * m_o, p=p, m_o=m_o)


def asymptotic_limits(n: ThreeVector, v: BoostVelocity, m_s: float) -> AsymptoticLimits:
    """
    Infinite-speed limits seen from a frame moving with v relative to Sigma.
    The direction of the infinite-speed velocity is n, so u . v -> n . v.
    """
    _require_unit(n)
    if not m_s > 0:
        raise DomainError(f"m_s must be positive, got {m_s}")
    nv = n.dot(v.v)
    factor = 1.0 / math.sqrt((1.0 - nv) * (1.0 + nv))
    return AsymptoticLimits(p_inf=n.scaled(m_s * factor), E_inf=-m_s * nv * factor)


# Momentum boosts
# ==============================================================================

def boost_four_momentum(E: float, p: ThreeVector, v: BoostVelocity) -> Tuple[float, ThreeVector]:
    """Lorentz boost of (E, p)."""
    return v.gamma * (E - v.v.dot(p)), _boost_position(p, E, v)


def boost_spacelike(pm: SpacelikeFourMomentum, v: BoostVelocity) -> SpacelikeFourMomentum:
    E, p = boost_four_momentum(pm.E, pm.p, v)
    return SpacelikeFourMomentum(E=E, p=p, m_s=pm.m_s)


def boost_timelike(pm: TimelikeFourMomentum, v: BoostVelocity) -> TimelikeFourMomentum:
    E, p = boost_four_momentum(pm.E, pm.p, v)
    return TimelikeFourMomentum(E=E, p=p, m_o=pm.m_o)


def ggt_four_momentum(E: float, p: ThreeVector, v: BoostVelocity) -> GGTMomentum:
    """
    Covariant (E, k) of a Sigma-frame four-momentum in the GGT coordinates of S.
    The energy equals the SR energy of S; k = p' + E' v.
    """
    E_s, p_s = boost_four_momentum(E, p, v)
    return GGTMomentum(energy=E_s, momentum=p_s + v.v.scaled(E_s), velocity=v.v)


def ggt_mass_shell(pm: GGTMomentum) -> float:
    """g^{mu nu} P_mu P_nu in GGT coordinates: (1 - v^2) E^2 + 2 E v . k - k^2."""
    v, k, E = pm.velocity, pm.momentum, pm.energy
    return (1.0 - v.dot(v)) * E * E + 2.0 * E * v.dot(k) - k.dot(k)


# Helicity-flip threshold
# ==============================================================================

def momentum_sign_under_boost(u: float, v: float) -> int:
    """
    Sign of the x-momentum of a unit-mass particle moving with speed u along
    +x, seen from a frame boosted by v along +x.
    """
    x_axis = ThreeVector(1.0, 0.0, 0.0)
    if u < 1.0:
        pm = timelike_four_momentum(u, x_axis, 1.0)
        E, p = pm.E, pm.p
    elif u == 1.0:
        E, p = 1.0, x_axis
    else:
        pm = spacelike_momentum_from_speed(u, x_axis, 1.0)
        E, p = pm.E, pm.p
    _, p_boosted = boost_four_momentum(E, p, BoostVelocity.of(v))
    return 1 if p_boosted.x > 0 else (-1 if p_boosted.x < 0 else 0)


def momentum_flip_boost(u: float, direction: int = 1) -> Optional[float]:
    """
    Smallest boost speed that reverses the 1D momentum (and so the helicity)
    of a particle with speed u; None when no subluminal boost can do it
    (u >= c). The threshold carries the sign of the particle's direction.
    """
    if not u > 0:
        raise DomainError(f"Speed must be positive, got u = {u}")
    if direction not in (1, -1):
        raise DomainError(f"direction must be +1 or -1, got {direction}")
    if u >= 1.0:
        return None
    return direction * u
