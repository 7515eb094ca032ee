"""
CLI entry point for the spacelike Dirac toolkit.
Allows running: python -m spacelike_dirac <subcommand> [options]

Exit codes: 0 success, 1 verification failure, 2 domain or regime error,
3 evanescent blowup.
"""

from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple
from contextlib import contextmanager
import argparse
import itertools
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from .core import (
    Bispinor,
    BoostVelocity,
    Branch,
    EvanescentPolicy,
    Event,
    Grid1D,
    Integrator,
    Regime,
    Representation,
    Species,
    ThreeVector,
)
from .errors import DomainError, EvanescentBlowupError, EvanescentError, SpacelikeError, VerificationError
from .evolution import (
    EvolutionConfig,
    EvolutionEngine,
    init_gaussian_packet,
    init_mode,
    init_plane_wave,
    init_random,
)
from .kinematics import (
    asymptotic_limits,
    boost_four_momentum,
    classify_interval,
    dispersion_energy,
    ggt_boost,
    ggt_four_momentum,
    ggt_mass_shell,
    ggt_to_sr_event,
    interval,
    lorentz_boost,
    spacelike_momentum_from_speed,
)
from .planewave import bispinor_basis, physical_selection
from .reporting import (
    EVOLVE_COLUMNS,
    FORMATS,
    AlgebraRecord,
    BispinorRecord,
    BoostRecord,
    DispersionRecord,
    EventRecord,
    EvolveRecord,
    EvolveRow,
    EvolveSummary,
    IntervalRecord,
    LimitEntry,
    LimitsRecord,
    MomentumRecord,
    RunConfig,
    SolutionRecord,
    evolve_csv_header,
    evolve_csv_line,
    render,
    render_human,
    render_human_table,
)
from .spinor_algebra import BASIS, verify_algebra
from .units import (
    mass_square_to_ms,
    natural_length_to_nm,
    natural_time_to_seconds,
    nm_to_natural_length,
    seconds_to_natural_time,
)
from .weyl import to_weyl_state

FORMAT_ENV = "SPACELIKE_DIRAC_FORMAT"

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_DOMAIN = 2
EXIT_BLOWUP = 3

# Named scenarios; each expands to one full subcommand invocation.
PRESETS: Dict[str, List[str]] = {
    "superluminal-speed": ["dispersion", "--m_s-ev", "1.6", "--p-ev", "16"],
    "bispinor-table": ["bispinor", "--m_s-ev", "1.6", "--p-ev", "16", "--species", "nubar"],
    "energy-limit": ["limits", "--m_s-ev", "1", "--v", "1e-3", "0", "0", "--n", "1", "0", "0"],
    "mass-square-3": ["dispersion", "--mass-square-ev2", "-3", "--p-ev", "16"],
    "charge-conservation": [
        "evolve", "--m_s-ev", "1", "--grid", "256", "--dz", "0.025", "--dt", "1e-3",
        "--steps", "1000", "--init", "plane", "--mode", "2", "--report-every", "100",
    ],
    "packet-speed": [
        "evolve", "--m_s-ev", "1", "--grid", "512", "--dz", "0.1", "--dt", "0.1",
        "--steps", "100", "--init", "packet", "--k0", "10", "--width", "1", "--report-every", "10",
    ],
    "norm-witness": [
        "evolve", "--m_s-ev", "1", "--grid", "64", "--dz", "0.1", "--dt", "0.01",
        "--steps", "100", "--init", "mode0", "--report-every", "10",
    ],
}


def _vector(values: Sequence[float], name: str) -> ThreeVector:
    """One number means a component along x; three are (x, y, z)."""
    if len(values) == 1:
        return ThreeVector(float(values[0]), 0.0, 0.0)
    if len(values) == 3:
        return ThreeVector(*(float(v) for v in values))
    raise DomainError(f"{name} takes 1 or 3 components, got {len(values)}")


def _mass(args: argparse.Namespace) -> float:
    if args.mass_square_ev2 is not None:
        return mass_square_to_ms(args.mass_square_ev2)
    if not args.m_s_ev > 0:
        raise DomainError(f"m_s must be positive, got {args.m_s_ev}")
    return args.m_s_ev


# Flags allowed to carry inf
INFINITE_FLAGS = {"u_s"}


def _require_finite(args: argparse.Namespace):
    """Reject inf and nan in numeric flags before any handler runs."""
    for name, value in sorted(vars(args).items()):
        if name in INFINITE_FLAGS:
            continue
        values = value if isinstance(value, list) else [value]
        flat = itertools.chain.from_iterable(v if isinstance(v, list) else [v] for v in values)
        if any(isinstance(v, float) and not math.isfinite(v) for v in flat):
            raise DomainError(f"{name} must be finite, got {value}")


def _add_mass(parser: argparse.ArgumentParser, required: bool = True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--m_s-ev", type=float, help="Mass parameter m_s c^2 in eV")
    group.add_argument("--mass-square-ev2", type=float, help="Negative mass square m^2 in eV^2 (m_s = sqrt(-m^2))")


# Subcommands
# ==============================================================================

def cmd_verify_algebra(args: argparse.Namespace) -> Tuple[Dict[str, Any], int]:
    basis = BASIS.with_beta_s(BASIS.beta) if args.negative_control else BASIS
    report = verify_algebra(basis)
    for failure in report.failures():
        logging.warning(f"Identity failed: {failure.name} (deviation {failure.max_deviation})")
    record = AlgebraRecord(negative_control=args.negative_control, all_passed=report.all_passed,
                           checks=report.checks)
    return record.to_dict(), EXIT_OK if report.all_passed else EXIT_VERIFICATION


def cmd_dispersion(args: argparse.Namespace) -> Tuple[Dict[str, Any], int]:
    m_s = _mass(args)
    if args.p_ev is not None:
        d = dispersion_energy(args.p_ev, m_s)
        if d.regime is Regime.EVANESCENT:
            raise EvanescentError(
                f"evanescent: |p| = {d.p} eV < m_s = {m_s} eV, E = +-i {d.kappa} eV has no real value"
            )
        p, E = d.p, d.E_plus
    else:
        pm = spacelike_momentum_from_speed(args.u_s, ThreeVector(0.0, 0.0, 1.0), m_s)
        p, E = pm.p.norm(), pm.E
    regime = dispersion_energy(p, m_s).regime
    record = DispersionRecord(
        m_s=m_s,
        mass_square=-m_s * m_s,
        p=p,
        regime=regime.value,
        E=E,
        invariant=p * p - E * E,
        speed_class="finite" if E > 0 else "infinite",
        u_s=p / E if E > 0 else None,
    )
    return record.to_dict(), EXIT_OK


def cmd_limits(args: argparse.Namespace) -> Tuple[Dict[str, Any], int]:
    m_s = _mass(args)
    v = BoostVelocity(_vector(args.v, "--v"))
    if args.n is not None:
        n = _vector(args.n, "--n").unit_vector()
    else:
        n = v.v.unit_vector() if v.speed > 0 else ThreeVector(1.0, 0.0, 0.0)

    def entry(direction: ThreeVector) -> LimitEntry:
        limits = asymptotic_limits(direction, v, m_s)
        return LimitEntry(direction=direction.as_list(), p_inf=limits.p_inf.as_list(), E_inf=limits.E_inf)

    record = LimitsRecord(m_s=m_s, v=v.v.as_list(), plus=entry(n), minus=entry(-n))
    return record.to_dict(), EXIT_OK


def cmd_bispinor(args: argparse.Namespace) -> Tuple[Dict[str, Any], int]:
    m_s = _mass(args)
    species = Species(args.species)
    basis = bispinor_basis(args.p_ev, m_s, species.momentum_sign)
    physical = physical_selection(args.p_ev, m_s, species)
    psi1 = basis[Branch.PSI1]
    record = BispinorRecord(
        m_s=m_s,
        p=psi1.p,
        species=species.value,
        E=psi1.E,
        A=psi1.A,
        N=psi1.N,
        u_s=psi1.p / psi1.E,
        basis=[SolutionRecord.of(s) for s in basis.values()],
        physical=SolutionRecord.of(physical),
    )
    return record.to_dict(), EXIT_OK


def _event_deviation(a: Event, b: Event) -> float:
    return max(abs(a.t - b.t), (a.r - b.r).norm())


def cmd_boost(args: argparse.Namespace) -> Tuple[Dict[str, Any], int]:
    v = BoostVelocity(_vector(args.v, "--v"))
    record = BoostRecord(map=args.map, v=v.v.as_list())
    deviations: List[float] = []

    events = [Event(t=T, r=ThreeVector(X, Y, Z)) for T, X, Y, Z in (args.event or [])]
    mapped = [ggt_boost(e, v) if args.map == "ggt" else lorentz_boost(e, v) for e in events]
    record.events_in = [EventRecord.of(e) for e in events]
    record.events_out = [EventRecord.of(e) for e in mapped]
    for i, j in itertools.combinations(range(len(events)), 2):
        before, after = interval(events[i], events[j]), interval(mapped[i], mapped[j])
        deviations.append(abs(after - before))
        record.intervals.append(IntervalRecord(
            first=i,
            second=j,
            before=before,
            after=after,
            kind=classify_interval(before).value,
            simultaneous_before=events[i].t == events[j].t,
            simultaneous_after=mapped[i].t == mapped[j].t,
        ))
    if args.map == "ggt" and events:
        record.max_lt_deviation = max(
            _event_deviation(ggt_to_sr_event(g), lorentz_boost(e, v)) for e, g in zip(events, mapped)
        )

    for E, px, py, pz in args.momentum or []:
        p = ThreeVector(px, py, pz)
        invariant = E * E - p.dot(p)
        record.momenta_in.append(MomentumRecord(E=E, p=p.as_list(), invariant=invariant))
        if args.map == "ggt":
            g = ggt_four_momentum(E, p, v)
            out = MomentumRecord(E=g.energy, p=g.momentum.as_list(), invariant=ggt_mass_shell(g))
        else:
            E2, p2 = boost_four_momentum(E, p, v)
            out = MomentumRecord(E=E2, p=p2.as_list(), invariant=E2 * E2 - p2.dot(p2))
        record.momenta_out.append(out)
        deviations.append(abs(out.invariant - invariant))

    record.max_invariant_deviation = max(deviations, default=0.0)
    return record.to_dict(), EXIT_OK


def _initial_state(args: argparse.Namespace, grid: Grid1D, m_s: float, sign: int):
    branch = Branch(args.branch)
    initializers: Dict[str, Callable[[], Any]] = {
        "plane": lambda: init_plane_wave(grid, args.mode, branch, m_s, sign),
        "packet": lambda: init_gaussian_packet(grid, args.k0, args.width, branch, m_s, sign, args.center),
        "random": lambda: init_random(grid, np.random.default_rng(args.seed), m_s, sign, args.propagating_only),
        "mode0": lambda: init_mode(grid, 0, Bispinor.of(1, 0, 1, 0), m_s, sign),
    }
    state = initializers[args.init]()
    if args.inject_k0:
        uniform = init_mode(grid, 0, Bispinor.of(1, 0, 1, 0), m_s, sign, amplitude=args.inject_k0)
        state = state.evolved(state.values + uniform.values, state.time)
    if args.representation == Representation.WEYL.value:
        state = to_weyl_state(state)
    return state


def _run_config(args: argparse.Namespace, fmt: str) -> RunConfig:
    skip = {"handler", "format", "output", "seed", "preset", "verbose", "command"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return RunConfig(command=args.command, params=params, format=fmt, output=args.output,
                     seed=args.seed, preset=args.preset)


def cmd_evolve(args: argparse.Namespace, fmt: str, out: TextIO) -> int:
    m_s = _mass(args)
    dz = nm_to_natural_length(args.dz_nm) if args.dz_nm is not None else args.dz
    dt = seconds_to_natural_time(args.dt_s) if args.dt_s is not None else args.dt
    grid = Grid1D(n_points=args.grid, dz=dz)
    sign = Species(args.species).momentum_sign
    config = EvolutionConfig(
        integrator=Integrator(args.integrator),
        dt=dt,
        steps=args.steps,
        evanescent_policy=EvanescentPolicy(args.evanescent),
        amplitude_cap=args.amplitude_cap,
        cfl=args.cfl,
        stencil_order=args.stencil_order,
        workers=args.workers,
        report_every=args.report_every,
    )
    state = _initial_state(args, grid, m_s, sign)
    engine = EvolutionEngine(config)
    report = engine.new_report(state)

    if fmt == "csv":
        out.write(evolve_csv_header())
    for row, current in engine.iter_run(state):
        report.rows.append(row)
        report.final_state = current
        if fmt == "csv":
            out.write(evolve_csv_line(EvolveRow.of(row)))
            out.flush()

    if args.snapshot:
        Path(args.snapshot).write_text(json.dumps(report.final_state.to_snapshot(), sort_keys=True) + "\n")
        logging.info(f"Snapshot written to {args.snapshot}")

    summary = EvolveSummary(
        steps=report.steps_taken,
        final_time=report.final_state.time,
        final_time_s=natural_time_to_seconds(report.final_state.time),
        max_charge_drift=report.max_charge_drift(),
        initial_evanescent_fraction=report.initial_evanescent_fraction,
        box_length=grid.length,
        box_length_nm=natural_length_to_nm(grid.length),
        centroid_speed=report.centroid_speed(),
        snapshot=args.snapshot,
    )
    logging.info(f"Max charge drift {summary.max_charge_drift:.3e}, centroid speed {summary.centroid_speed}")
    if fmt == "csv":
        return EXIT_OK

    record = EvolveRecord(run_config=_run_config(args, fmt), summary=summary,
                          rows=[EvolveRow.of(r) for r in report.rows])
    if fmt == "json":
        out.write(render(record.to_dict(), "json"))
    else:
        data = record.to_dict()
        out.write(render_human({"run_config": data["run_config"], "summary": data["summary"]}))
        out.write("\n")
        out.write(render_human_table(EVOLVE_COLUMNS, ([r[c] for c in EVOLVE_COLUMNS] for r in data["rows"])))
    return EXIT_OK


# Parser
# ==============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spacelike-dirac",
        description="Spacelike Dirac toolkit - tachyonic neutrino kinematics, plane waves and lattice evolution",
        allow_abbrev=False,
    )
    parser.add_argument("--preset", choices=sorted(PRESETS),
                        help="Run a named scenario (global options must come first)")
    parser.add_argument("--format", choices=FORMATS, default=None,
                        help=f"Output format (default: ${FORMAT_ENV}, else csv for evolve and json otherwise)")
    parser.add_argument("--output", type=str, help="Write output to this path instead of stdout")
    parser.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-algebra", help="Check the matrix identities of the equation", allow_abbrev=False)
    p.add_argument("--negative-control", action="store_true", help="Use beta in place of beta_s (must fail)")
    p.set_defaults(handler=cmd_verify_algebra)

    p = sub.add_parser("dispersion", help="Energy and speed at one momentum or speed", allow_abbrev=False)
    _add_mass(p)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--p-ev", type=float, help="Momentum |p| c in eV")
    which.add_argument("--u_s", type=float, help="Speed in units of c (> 1, 'inf' allowed)")
    p.set_defaults(handler=cmd_dispersion)

    p = sub.add_parser("limits", help="Infinite-speed momentum and energy seen from a moving frame",
                       allow_abbrev=False)
    _add_mass(p)
    p.add_argument("--v", type=float, nargs="+", required=True, help="Frame velocity: vx or vx vy vz")
    p.add_argument("--n", type=float, nargs="+", help="Direction of motion (default: along v)")
    p.set_defaults(handler=cmd_limits)

    p = sub.add_parser("bispinor", help="Plane-wave bispinors, densities and physical selection",
                       allow_abbrev=False)
    _add_mass(p)
    p.add_argument("--p-ev", type=float, required=True, help="Momentum p c in eV along +z")
    p.add_argument("--species", choices=[s.value for s in Species], default=Species.ANTINEUTRINO.value)
    p.set_defaults(handler=cmd_bispinor)

    p = sub.add_parser("boost", help="GGT or Lorentz map of events or four-momenta", allow_abbrev=False)
    inputs = p.add_mutually_exclusive_group(required=True)
    inputs.add_argument("--event", type=float, nargs=4, action="append", metavar=("T", "X", "Y", "Z"))
    inputs.add_argument("--momentum", type=float, nargs=4, action="append", metavar=("E", "PX", "PY", "PZ"))
    p.add_argument("--v", type=float, nargs="+", required=True, help="Frame velocity: vx or vx vy vz")
    p.add_argument("--map", choices=["ggt", "lt"], default="ggt")
    p.set_defaults(handler=cmd_boost)

    p = sub.add_parser("evolve", help="Lattice evolution with per-step diagnostics", allow_abbrev=False)
    _add_mass(p)
    p.add_argument("--species", choices=[s.value for s in Species], default=Species.ANTINEUTRINO.value)
    p.add_argument("--grid", type=int, default=256, help="Number of sites (power of two)")
    spacing = p.add_mutually_exclusive_group()
    spacing.add_argument("--dz", type=float, default=0.025, help="Site spacing in hbar c / eV")
    spacing.add_argument("--dz-nm", type=float, help="Site spacing in nm")
    step = p.add_mutually_exclusive_group()
    step.add_argument("--dt", type=float, default=1e-3, help="Time step in hbar / eV")
    step.add_argument("--dt-s", type=float, help="Time step in seconds")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--init", choices=["plane", "packet", "random", "mode0"], default="plane")
    p.add_argument("--mode", type=int, default=2, help="Fourier mode index for --init plane")
    p.add_argument("--branch", choices=[b.value for b in Branch], default=Branch.PSI1.value)
    p.add_argument("--k0", type=float, default=10.0, help="Packet central wavenumber")
    p.add_argument("--width", type=float, default=1.0, help="Packet spatial width")
    p.add_argument("--center", type=float, default=None, help="Packet center (default L/4)")
    p.add_argument("--propagating-only", action="store_true", help="Strip evanescent modes from --init random")
    p.add_argument("--inject-k0", type=float, default=0.0, metavar="AMP",
                   help="Add a uniform k = 0 component of this amplitude")
    p.add_argument("--representation", choices=[r.value for r in Representation],
                   default=Representation.DIRAC.value)
    p.add_argument("--integrator", choices=[i.value for i in Integrator], default=Integrator.SPECTRAL.value)
    p.add_argument("--evanescent", choices=[e.value for e in EvanescentPolicy], default=EvanescentPolicy.WARN.value)
    p.add_argument("--amplitude-cap", type=float, default=EvolutionConfig.amplitude_cap)
    p.add_argument("--cfl", type=float, default=EvolutionConfig.cfl)
    p.add_argument("--stencil-order", type=int, choices=[2, 4, 6], default=EvolutionConfig.stencil_order)
    p.add_argument("--workers", type=int, default=1, help="Threads for the spectral step")
    p.add_argument("--report-every", type=int, default=1)
    p.add_argument("--snapshot", type=str, help="Write the final state as JSON to this path")
    p.set_defaults(handler=cmd_evolve)

    return parser


def expand_preset(argv: List[str]) -> Tuple[List[str], Optional[str]]:
    """Replace --preset NAME by the scenario's subcommand, keeping other global options."""
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--preset", choices=sorted(PRESETS))
    known, rest = pre.parse_known_args(argv)
    if known.preset is None:
        return argv, None
    return rest + PRESETS[known.preset], known.preset


def configure_logging(verbosity: int):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s: %(message)s")


def resolve_format(args: argparse.Namespace) -> str:
    if args.format:
        return args.format
    env = os.environ.get(FORMAT_ENV)
    if env:
        if env not in FORMATS:
            raise DomainError(f"{FORMAT_ENV}={env!r} is not one of {', '.join(FORMATS)}")
        return env
    return "csv" if args.command == "evolve" else "json"


@contextmanager
def _open_output(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as handle:
            yield handle


def main(argv: Optional[List[str]] = None) -> int:
    """Parse, dispatch and map the error hierarchy onto exit codes."""
    argv = list(sys.argv[1:] if argv is None else argv)
    argv, preset = expand_preset(argv)
    args = build_parser().parse_args(argv)
    args.preset = preset
    configure_logging(args.verbose)

    try:
        _require_finite(args)
        fmt = resolve_format(args)
        with _open_output(args.output) as out:
            if args.command == "evolve":
                return cmd_evolve(args, fmt, out)
            data, code = args.handler(args)
            out.write(render(data, fmt))
            return code
    except EvanescentBlowupError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_BLOWUP
    except VerificationError as e:
        print(f"❌ Verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except DomainError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except SpacelikeError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
