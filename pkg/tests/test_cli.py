"""Tests for the command-line front end."""

import csv
import io
import json
import math
import pytest
from jsonschema import validate
from spacelike_dirac.__main__ import EXIT_BLOWUP, EXIT_DOMAIN, EXIT_OK, EXIT_VERIFICATION, FORMAT_ENV, main
from spacelike_dirac.reporting import EVOLVE_COLUMNS, load_schema


def run_cli(capsys, *argv):
    """Run main() and return (exit code, stdout, stderr)."""
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run_cli(capsys, "--format", "json", *argv)
    assert code == EXIT_OK
    data = json.loads(out)
    validate(data, load_schema(data["command"]))
    return data


def test_verify_algebra(capsys):
    """Test the algebra check and its negative control."""
    data = run_json(capsys, "verify-algebra")
    assert data["all_passed"]
    assert all(c["max_deviation"] == 0.0 for c in data["checks"])

    code, out, _ = run_cli(capsys, "verify-algebra", "--negative-control")
    assert code == EXIT_VERIFICATION
    report = json.loads(out)
    assert not report["all_passed"]
    assert "beta_s^2 = -I" in {c["name"] for c in report["checks"] if not c["passed"]}


def test_superluminal_speed_preset(capsys):
    """Test the speed scenario at m_s = 1.6 eV, p = 16 eV."""
    data = run_json(capsys, "--preset", "superluminal-speed")
    assert data["regime"] == "propagating"
    assert data["speed_class"] == "finite"
    assert abs(data["u_s"] - 1.005) < 5e-4
    assert data["invariant"] == pytest.approx(1.6 ** 2, rel=1e-10)


def test_mass_square_preset(capsys):
    """Test m_s from m^2 = -3 eV^2."""
    data = run_json(capsys, "--preset", "mass-square-3")
    assert data["m_s"] == pytest.approx(math.sqrt(3.0))
    assert data["mass_square"] == pytest.approx(-3.0)
    assert data["invariant"] == pytest.approx(3.0, rel=1e-10)


def test_dispersion_from_speed(capsys):
    """Test dispersion from a given speed, including the infinite-speed state."""
    data = run_json(capsys, "dispersion", "--m_s-ev", "1.6", "--u_s", "1.005")
    assert data["p"] == pytest.approx(16.0, rel=5e-3)
    assert data["u_s"] == pytest.approx(1.005, rel=1e-9)

    data = run_json(capsys, "dispersion", "--m_s-ev", "2", "--u_s", "inf")
    assert data["speed_class"] == "infinite"
    assert data["u_s"] is None
    assert data["E"] == 0.0
    assert data["p"] == 2.0
    assert data["regime"] == "threshold"


def test_dispersion_far_from_threshold(capsys):
    """Test schema-valid output when p >> m_s and when u_s is enormous."""
    data = run_json(capsys, "dispersion", "--m_s-ev", "1", "--p-ev", "1e9")
    assert data["regime"] == "propagating"
    assert data["u_s"] == pytest.approx(1.0, abs=1e-12)

    data = run_json(capsys, "dispersion", "--m_s-ev", "1", "--u_s", "1e200")
    assert data["speed_class"] == "finite"
    assert data["p"] == pytest.approx(1.0, rel=1e-12)
    assert data["E"] == pytest.approx(1e-200, rel=1e-12)
    assert data["u_s"] == pytest.approx(1e200, rel=1e-12)


def test_non_finite_flags_are_domain_errors(capsys):
    """Test that inf and nan inputs exit with code 2 and no output."""
    invocations = [
        ["dispersion", "--m_s-ev", "1", "--p-ev", "inf"],
        ["dispersion", "--m_s-ev", "nan", "--p-ev", "2"],
        ["boost", "--v", "0.5", "--event", "0", "inf", "0", "0"],
        ["evolve", "--m_s-ev", "1", "--dt", "nan", "--steps", "1"],
    ]
    for argv in invocations:
        code, out, err = run_cli(capsys, *argv)
        assert code == EXIT_DOMAIN
        assert out == ""
        assert "must be finite" in err


def test_dispersion_domain_errors(capsys):
    """Test exit code 2 for evanescent and invalid inputs."""
    code, out, err = run_cli(capsys, "dispersion", "--m_s-ev", "1", "--p-ev", "0.5")
    assert code == EXIT_DOMAIN
    assert out == ""
    assert "evanescent" in err

    code, _, err = run_cli(capsys, "dispersion", "--m_s-ev", "1", "--u_s", "0.9")
    assert code == EXIT_DOMAIN
    code, _, _ = run_cli(capsys, "dispersion", "--mass-square-ev2", "3", "--p-ev", "16")
    assert code == EXIT_DOMAIN


def test_energy_limit_preset(capsys):
    """Test E_inf in a frame moving at 1e-3 c."""
    data = run_json(capsys, "--preset", "energy-limit")
    assert data["plus"]["E_inf"] == pytest.approx(-1.0000005e-3, rel=1e-9)
    assert data["minus"]["E_inf"] == -data["plus"]["E_inf"]
    assert data["minus"]["direction"] == [-1.0, -0.0, -0.0]


def test_bispinor_preset(capsys):
    """Test the bispinor table and the physical antineutrino."""
    data = run_json(capsys, "--preset", "bispinor-table")
    assert data["A"] == pytest.approx(0.904534, abs=1e-6)
    assert 0.9 <= data["A"] <= 1.0
    assert [s["branch"] for s in data["basis"]] == ["psi1", "psi2", "psi3", "psi4"]
    assert data["physical"]["branch"] == "psi1"
    assert data["physical"]["rho"] * 1.6 == pytest.approx(data["E"], rel=1e-12)
    assert all(s["residual"] <= 1e-12 for s in data["basis"])


def test_bispinor_neutrino(capsys):
    """Test the left-handed physical neutrino."""
    data = run_json(capsys, "bispinor", "--m_s-ev", "1.6", "--p-ev", "16", "--species", "nu")
    physical = data["physical"]
    assert physical["helicity"] == -1
    assert physical["energy_sign"] == 1
    assert physical["rho"] > 0
    assert physical["components"][0] == [0.0, 0.0]

    code, _, _ = run_cli(capsys, "bispinor", "--m_s-ev", "1.6", "--p-ev", "1.6")
    assert code == EXIT_DOMAIN


def test_ggt_boost_of_events(capsys):
    """Test GGT coordinates, absolute simultaneity and agreement with the Lorentz boost."""
    data = run_json(capsys, "boost", "--v", "0.6", "--event", "1", "0.5", "0", "0",
                    "--event", "1", "-2", "0", "0", "--event", "3", "1", "1", "0")
    assert data["events_out"][0]["t"] == pytest.approx(0.8)
    assert data["events_out"][0]["r"][0] == pytest.approx(-0.125)
    assert data["max_lt_deviation"] <= 1e-12
    assert data["max_invariant_deviation"] <= 1e-12
    assert len(data["intervals"]) == 3
    first = data["intervals"][0]
    assert first["simultaneous_before"] and first["simultaneous_after"]

    lt = run_json(capsys, "boost", "--map", "lt", "--v", "0.6", "--event", "1", "0.5", "0", "0",
                  "--event", "1", "-2", "0", "0")
    assert lt["max_lt_deviation"] is None
    assert not lt["intervals"][0]["simultaneous_after"]
    assert lt["max_invariant_deviation"] <= 1e-12


def test_boost_identity_and_momenta(capsys):
    """Test the v = 0 identity and invariant-preserving momentum boosts."""
    data = run_json(capsys, "boost", "--map", "lt", "--v", "0", "--event", "2", "1", "2", "3")
    assert data["events_out"][0]["t"] == 2.0
    assert data["events_out"][0]["r"] == [1.0, 2.0, 3.0]

    for mapping in ("lt", "ggt"):
        data = run_json(capsys, "boost", "--map", mapping, "--v", "0.3", "0.2", "0.1",
                        "--momentum", "0.5", "1", "0", "0", "--momentum", "3", "1", "1", "1")
        assert data["momenta_in"][0]["invariant"] == pytest.approx(-0.75)
        assert data["max_invariant_deviation"] <= 1e-12

    code, _, _ = run_cli(capsys, "boost", "--v", "1.2", "--event", "0", "0", "0", "0")
    assert code == EXIT_DOMAIN


def test_charge_conservation_preset(capsys):
    """Test the plane-wave evolution report."""
    data = run_json(capsys, "--preset", "charge-conservation")
    summary = data["summary"]
    assert summary["steps"] == 1000
    assert summary["max_charge_drift"] <= 1e-10
    assert summary["box_length"] == pytest.approx(6.4)
    assert summary["box_length_nm"] == pytest.approx(6.4 * 197.3269804)
    assert [row["step"] for row in data["rows"]] == list(range(0, 1001, 100))
    assert data["run_config"]["preset"] == "charge-conservation"
    assert data["run_config"]["params"]["mode"] == 2


def test_evolve_streams_csv_by_default(capsys):
    """Test the CSV row stream of evolve."""
    code, out, _ = run_cli(capsys, "evolve", "--m_s-ev", "1", "--grid", "64", "--dz", "0.2",
                           "--steps", "10", "--dt", "0.01", "--mode", "3")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == EVOLVE_COLUMNS
    assert len(rows) == 12
    assert [int(r[0]) for r in rows[1:]] == list(range(11))
    assert float(rows[-1][1]) == pytest.approx(0.1)


def test_evolve_rk4_and_weyl(capsys):
    """Test the rk4 integrator on a Weyl-layout state."""
    data = run_json(capsys, "evolve", "--m_s-ev", "1", "--grid", "64", "--dz", "0.2", "--steps", "20",
                    "--dt", "0.01", "--mode", "3", "--integrator", "rk4", "--representation", "weyl",
                    "--stencil-order", "6")
    assert data["summary"]["max_charge_drift"] <= 1e-6

    code, _, err = run_cli(capsys, "evolve", "--m_s-ev", "1", "--grid", "64", "--dz", "0.2",
                           "--dt", "0.5", "--mode", "3", "--integrator", "rk4")
    assert code == EXIT_DOMAIN
    assert "CFL" in err


def test_evolve_policies(capsys):
    """Test project and fail policies on a state with injected k = 0 content."""
    common = ["evolve", "--m_s-ev", "1", "--grid", "64", "--dz", "0.1", "--dt", "0.01",
              "--steps", "20", "--mode", "5", "--inject-k0", "0.5"]
    data = run_json(capsys, *common, "--evanescent", "project")
    assert all(row["max_evanescent_amp"] <= 1e-12 for row in data["rows"])
    assert data["summary"]["initial_evanescent_fraction"] > 0

    code, _, err = run_cli(capsys, *common, "--evanescent", "fail")
    assert code == EXIT_BLOWUP
    assert "[0]" in err


def test_amplitude_cap_exit_code(capsys):
    """Test exit code 3 when a growing mode passes the cap."""
    code, _, err = run_cli(capsys, "--format", "json", "--preset", "norm-witness")
    assert code == EXIT_OK
    code, _, err = run_cli(capsys, "evolve", "--m_s-ev", "1", "--grid", "64", "--dz", "0.1",
                           "--dt", "0.01", "--steps", "100", "--init", "mode0", "--amplitude-cap", "2")
    assert code == EXIT_BLOWUP
    assert "modes [0]" in err


def test_random_init_is_seeded(capsys):
    """Test that --seed fixes the random initial state."""
    args = ["evolve", "--m_s-ev", "1", "--grid", "64", "--dz", "0.1", "--steps", "5", "--init", "random",
            "--propagating-only"]
    first = run_json(capsys, "--seed", "5", *args)
    second = run_json(capsys, "--seed", "5", *args)
    third = run_json(capsys, "--seed", "6", *args)
    assert first == second
    assert first["rows"][0]["Q"] != third["rows"][0]["Q"]
    assert first["run_config"]["seed"] == 5


def test_output_is_byte_identical(capsys):
    """Test deterministic output across repeated runs."""
    _, first, _ = run_cli(capsys, "--preset", "packet-speed")
    _, second, _ = run_cli(capsys, "--preset", "packet-speed")
    assert first == second
    rows = list(csv.reader(io.StringIO(first)))
    assert len(rows) == 12


def test_format_from_environment(capsys, monkeypatch):
    """Test the format environment variable and its precedence."""
    monkeypatch.setenv(FORMAT_ENV, "csv")
    code, out, _ = run_cli(capsys, "--preset", "superluminal-speed")
    assert code == EXIT_OK
    header, values = list(csv.reader(io.StringIO(out)))
    assert dict(zip(header, values))["regime"] == "propagating"

    code, out, _ = run_cli(capsys, "--format", "human", "--preset", "superluminal-speed")
    assert "speed_class" in out and "finite" in out

    monkeypatch.setenv(FORMAT_ENV, "yaml")
    code, _, _ = run_cli(capsys, "--preset", "superluminal-speed")
    assert code == EXIT_DOMAIN


def test_output_and_snapshot_files(capsys, tmp_path):
    """Test --output and --snapshot."""
    out_path = tmp_path / "report.json"
    snap_path = tmp_path / "state.json"
    code, out, _ = run_cli(capsys, "--format", "json", "--output", str(out_path), "evolve", "--m_s-ev", "1",
                           "--grid", "64", "--dz", "0.2", "--steps", "3", "--mode", "3",
                           "--snapshot", str(snap_path))
    assert code == EXIT_OK
    assert out == ""
    report = json.loads(out_path.read_text())
    validate(report, load_schema("evolve"))
    assert report["summary"]["snapshot"] == str(snap_path)

    snapshot = json.loads(snap_path.read_text())
    assert snapshot["grid"]["n_points"] == 64
    assert len(snapshot["re"]) == 64


def test_argument_errors_exit_through_argparse(capsys):
    """Test that malformed invocations are rejected by the parser."""
    with pytest.raises(SystemExit) as info:
        main(["dispersion", "--m_s-ev", "1"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["--preset", "no-such-scenario"])


def test_evolve_time_step_in_seconds(capsys):
    """Test --dt-s and the final time reported in seconds."""
    data = run_json(capsys, "evolve", "--m_s-ev", "1", "--grid", "64", "--dz", "0.2", "--mode", "3",
                    "--dt-s", "6.582119569e-19", "--steps", "10")
    summary = data["summary"]
    assert summary["final_time"] == pytest.approx(1e-2, rel=1e-12)
    assert summary["final_time_s"] == pytest.approx(6.582119569e-18, rel=1e-12)
    assert data["run_config"]["params"]["dt_s"] == 6.582119569e-19
