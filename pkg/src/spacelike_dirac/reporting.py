"""
Report records and renderers for the command-line front end.

Every subcommand builds one dataclasses-json record; JSON, CSV and human
output are all rendered from its dict form, so the three formats never
disagree. Published JSON Schemas live in the `schemas/` package data.
"""

from typing import Any, Dict, Iterable, List, Optional, Sequence
from dataclasses import dataclass, field
from importlib import resources
import csv
import io
import json

from dataclasses_json import dataclass_json

from .core import Event, PlaneWaveSolution
from .evolution import EvolutionStep
from .spinor_algebra import IdentityCheck
from .planewave import bilinears, density_current, solution_residual

SCHEMA_VERSION = "1.0"

FORMATS = ("json", "csv", "human")

# CSV header of the evolve row stream
EVOLVE_COLUMNS = ["step", "time", "Q", "norm", "continuity_residual", "max_evanescent_amp", "centroid"]


@dataclass_json
@dataclass
class RunConfig:
    """The parsed invocation; echoed in evolve reports."""
    command: str
    params: Dict[str, Any] = field(default_factory=dict)
    format: str = "json"
    output: Optional[str] = None
    seed: Optional[int] = None
    preset: Optional[str] = None


@dataclass_json
@dataclass
class AlgebraRecord:
    negative_control: bool
    all_passed: bool
    checks: List[IdentityCheck]
    command: str = "verify-algebra"
    schema_version: str = SCHEMA_VERSION


@dataclass_json
@dataclass
class DispersionRecord:
    m_s: float
    mass_square: float
    p: float
    regime: str
    E: float
    invariant: float              # p^2 - E^2, equal to m_s^2
    speed_class: str              # "finite" or "infinite"
    u_s: Optional[float] = None
    command: str = "dispersion"
    schema_version: str = SCHEMA_VERSION


@dataclass_json
@dataclass
class LimitEntry:
    direction: List[float]
    p_inf: List[float]
    E_inf: float


@dataclass_json
@dataclass
class LimitsRecord:
    m_s: float
    v: List[float]
    plus: LimitEntry
    minus: LimitEntry
    command: str = "limits"
    schema_version: str = SCHEMA_VERSION


@dataclass_json
@dataclass
class SolutionRecord:
    branch: str
    species: str
    p: float
    E: float
    helicity: int
    energy_sign: int
    A: float
    N: float
    components: List[List[float]]
    rho: float
    j: List[float]
    scalar: float
    pseudoscalar: float
    residual: float

    @classmethod
    def of(cls, solution: PlaneWaveSolution) -> "SolutionRecord":
        dc = density_current(solution.bispinor)
        bl = bilinears(solution.bispinor)
        return cls(
            branch=solution.branch.value,
            species=solution.species.value,
            p=solution.p,
            E=solution.E,
            helicity=solution.helicity,
            energy_sign=solution.energy_sign,
            A=solution.A,
            N=solution.N,
            components=solution.bispinor.as_pairs(),
            rho=dc.rho,
            j=dc.j.as_list(),
            scalar=bl.scalar,
            pseudoscalar=bl.pseudoscalar,
            residual=solution_residual(solution),
        )


@dataclass_json
@dataclass
class BispinorRecord:
    m_s: float
    p: float
    species: str
    E: float
    A: float
    N: float
    u_s: float
    basis: List[SolutionRecord]
    physical: SolutionRecord
    command: str = "bispinor"
    schema_version: str = SCHEMA_VERSION


@dataclass_json
@dataclass
class EventRecord:
    t: float
    r: List[float]
    frame: str

    @classmethod
    def of(cls, e: Event) -> "EventRecord":
        return cls(t=e.t, r=e.r.as_list(), frame=e.frame_tag)


@dataclass_json
@dataclass
class IntervalRecord:
    first: int
    second: int
    before: float
    after: float
    kind: str
    simultaneous_before: bool
    simultaneous_after: bool


@dataclass_json
@dataclass
class MomentumRecord:
    E: float
    p: List[float]
    invariant: float              # E^2 - p^2


@dataclass_json
@dataclass
class BoostRecord:
    map: str
    v: List[float]
    events_in: List[EventRecord] = field(default_factory=list)
    events_out: List[EventRecord] = field(default_factory=list)
    intervals: List[IntervalRecord] = field(default_factory=list)
    momenta_in: List[MomentumRecord] = field(default_factory=list)
    momenta_out: List[MomentumRecord] = field(default_factory=list)
    max_invariant_deviation: float = 0.0
    max_lt_deviation: Optional[float] = None      # ggt + time re-synchronisation vs lt
    command: str = "boost"
    schema_version: str = SCHEMA_VERSION


@dataclass_json
@dataclass
class EvolveSummary:
    steps: int
    final_time: float
    final_time_s: float
    max_charge_drift: float
    initial_evanescent_fraction: float
    box_length: float
    box_length_nm: float
    centroid_speed: Optional[float] = None
    snapshot: Optional[str] = None


@dataclass_json
@dataclass
class EvolveRow:
    step: int
    time: float
    Q: float
    norm: float
    continuity_residual: float
    max_evanescent_amp: float
    centroid: Optional[float] = None

    @classmethod
    def of(cls, row: EvolutionStep) -> "EvolveRow":
        return cls(
            step=row.step,
            time=row.time,
            Q=row.charge,
            norm=row.norm,
            continuity_residual=row.continuity_residual,
            max_evanescent_amp=row.max_evanescent_amp,
            centroid=row.centroid,
        )


@dataclass_json
@dataclass
class EvolveRecord:
    run_config: RunConfig
    summary: EvolveSummary
    rows: List[EvolveRow]
    command: str = "evolve"
    schema_version: str = SCHEMA_VERSION


# Renderers
# ==============================================================================

def render_json(data: Dict[str, Any]) -> str:
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"


def flatten(data: Any, prefix: str = "") -> Dict[str, Any]:
    """Dotted-key view of nested dicts and lists, in key order."""
    if isinstance(data, dict):
        items: Iterable = ((str(k), data[k]) for k in sorted(data))
    elif isinstance(data, list):
        items = ((str(i), v) for i, v in enumerate(data))
    else:
        return {prefix: data}
    flat: Dict[str, Any] = {}
    for key, value in items:
        flat.update(flatten(value, f"{prefix}.{key}" if prefix else key))
    return flat


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv_rows(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def render_csv(data: Dict[str, Any]) -> str:
    """One header row of dotted keys and one value row."""
    flat = flatten(data)
    return render_csv_rows(list(flat), [list(flat.values())])


def _human(value: Any) -> str:
    if isinstance(value, float):
        return "%.12g" % value
    return "-" if value is None else str(value)


def render_human(data: Dict[str, Any]) -> str:
    flat = flatten(data)
    width = max((len(k) for k in flat), default=0)
    return "".join(f"{key.ljust(width)}  {_human(value)}\n" for key, value in flat.items())


def render_human_table(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    cells = [list(columns)] + [[_human(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n" for r in cells)


def render(data: Dict[str, Any], fmt: str) -> str:
    renderers = {"json": render_json, "csv": render_csv, "human": render_human}
    return renderers[fmt](data)


def evolve_csv_header() -> str:
    return render_csv_rows(EVOLVE_COLUMNS, [])


def evolve_csv_line(row: EvolveRow) -> str:
    values = row.to_dict()
    return render_csv_rows(EVOLVE_COLUMNS, [[values[c] for c in EVOLVE_COLUMNS]]).split("\n", 1)[1]


# Schemas
# ==============================================================================

def schema_path(command: str):
    return resources.files("spacelike_dirac") / "schemas" / f"{command}.schema.json"


def load_schema(command: str) -> Dict[str, Any]:
    """Published JSON Schema of a subcommand's JSON output."""
    return json.loads(schema_path(command).read_text(encoding="utf-8"))
