import json

import pytest
from numpy.testing import assert_allclose

from xdiscord.cli import (
    EXIT_NONPHYSICAL,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    UsageError,
    attach_negative_triples,
    main,
    run,
)
from xdiscord.state_core import XStateParams

EXAMPLE_ARGS = ["--r", "0.3", "--s", "0.15", "--c=0.894427,-0.447214,0.5"]


def run_json(capsys, argv):
    assert main(argv) == EXIT_OK
    return json.loads(capsys.readouterr().out)


class TestCompute:
    def test_bell_state(self, capsys):
        data = run_json(capsys, ["compute", "--r", "0", "--s", "0", "--c", "1,-1,1"])
        assert_allclose(data["discord"], 1.0)
        assert_allclose(data["concurrence"], 1.0)
        assert data["params"] == {"r": 0.0, "s": 0.0, "c1": 1.0, "c2": -1.0, "c3": 1.0}

    def test_with_channel(self, capsys):
        data = run_json(capsys, ["compute", *EXAMPLE_ARGS, "--p", "1"])
        assert data["channel"] == {"kind": "phase_flip", "p": 1.0, "targets": "both"}
        assert data["concurrence"] == 0.0

    def test_time_parameterized_channel(self, capsys):
        data = run_json(capsys, ["compute", *EXAMPLE_ARGS, "--gamma", "1", "--t", "0.6931471805599453"])
        assert_allclose(data["channel"]["p"], 0.5)

    def test_out_of_bounds(self, capsys):
        assert main(["compute", "--r", "2", "--s", "0", "--c", "0,0,0"]) == EXIT_USAGE
        assert "must be <= 1" in capsys.readouterr().err

    def test_nonphysical(self, capsys):
        assert main(["compute", "--c", "1,1,1"]) == EXIT_NONPHYSICAL
        assert "non-physical" in capsys.readouterr().err

    def test_negative_leading_triple(self, capsys):
        data = run_json(capsys, ["compute", "--r", "0", "--s", "0", "--c", "-0.5,-0.5,-0.5"])
        assert_allclose(data["discord"], 0.262483, atol=1e-5)
        assert attach_negative_triples(["--c", "-.5,0,0", "--r", "-0.3"]) == ["--c=-.5,0,0", "--r", "-0.3"]

    def test_wrong_format(self, capsys):
        assert main(["compute", "--c", "0,0,0", "--format", "csv"]) == EXIT_USAGE

    def test_missing_correlations(self):
        with pytest.raises(UsageError):
            RunConfig(subcommand="compute")

    def test_bad_triple(self):
        with pytest.raises(SystemExit):
            main(["compute", "--c", "1,2"])

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        assert main(["compute", "--c", "0,0,0", "--output", str(target)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert_allclose(json.loads(target.read_text())["discord"], 0.0, atol=1e-12)

    def test_config_file(self, tmp_path, capsys):
        path = tmp_path / "state.json"
        path.write_text(json.dumps({"r": 0.0, "s": 0.0, "c": [1, -1, 1]}))
        data = run_json(capsys, ["compute", "--config", str(path)])
        assert_allclose(data["discord"], 1.0)

        data = run_json(capsys, ["compute", "--config", str(path), "--c", "0,0,0"])
        assert_allclose(data["discord"], 0.0, atol=1e-12)

    def test_config_file_unknown_key(self, tmp_path):
        path = tmp_path / "state.json"
        path.write_text(json.dumps({"c": [0, 0, 0], "colour": "blue"}))
        assert main(["compute", "--config", str(path)]) == EXIT_USAGE


class TestOracle:
    def test_agrees_with_closed_form(self, capsys):
        data = run_json(capsys, ["oracle", *EXAMPLE_ARGS, "--grid-n", "32", "--refine-depth", "6"])
        assert abs(data["discord"] - data["analytic_discord"]) <= 1e-3
        assert data["grid_resolution"] == 32
        assert set(data["best_axis"]) == {"nx", "ny", "nz"}


class TestDynamics:
    def test_events(self, capsys):
        data = run_json(capsys, ["dynamics", *EXAMPLE_ARGS, "--events"])
        events = data["events"]
        assert_allclose(events["p_transition"], 0.274369, atol=1e-3)
        assert_allclose(events["p_esd"], 0.4038, atol=1e-3)
        assert_allclose(events["p_crossing"], 0.2173, atol=1e-3)
        assert data["targets"] == "both"

    def test_csv(self, capsys):
        assert main(["dynamics", *EXAMPLE_ARGS, "--samples", "11"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "p,concurrence,classical,discord,mutual_information,s1,s2,s3"
        assert len(lines) == 12

    def test_time_sweep_needs_end(self, capsys):
        assert main(["dynamics", *EXAMPLE_ARGS, "--gamma", "1"]) == EXIT_USAGE

    def test_time_sweep(self, capsys):
        assert main(["dynamics", *EXAMPLE_ARGS, "--gamma", "1", "--t-max", "2", "--samples", "5"]) == EXIT_OK
        assert capsys.readouterr().out.splitlines()[0].startswith("t,p,")


class TestSurface:
    def test_summary(self, capsys):
        data = run_json(capsys, [
            "surface", "--r", "0.3", "--s", "0.3", "--c", "0,0,0",
            "--level", "0.03", "--grid-n", "16", "--format", "json",
        ])
        assert data["triangles"] > 0
        assert data["components"] >= 1
        assert data["grid_n"] == 16

    def test_obj_and_grid_csv(self, tmp_path, capsys):
        obj_path = tmp_path / "surface.obj"
        csv_path = tmp_path / "grid.csv"
        status = main([
            "surface", "--r", "0.3", "--s", "0.3", "--c", "0,0,0", "--level", "0.03",
            "--grid-n", "16", "--output", str(obj_path), "--grid-csv", str(csv_path),
        ])
        assert status == EXIT_OK
        lines = obj_path.read_text().splitlines()
        assert lines[0] == "# discord level 0.03"
        assert any(line.startswith("f ") for line in lines)
        assert len(csv_path.read_text().splitlines()) == 16 ** 3 + 1

    def test_correlations_optional(self, capsys):
        data = run_json(capsys, [
            "surface", "--r", "0.3", "--s", "0.3", "--level", "0.03", "--grid-n", "16", "--format", "json",
        ])
        assert data["triangles"] > 0

    def test_requires_level(self, capsys):
        assert main(["surface", "--c", "0,0,0"]) == EXIT_USAGE


class TestGeometry:
    def test_octahedron_point(self, capsys):
        data = run_json(capsys, ["geometry", "--c=0.5,0.25,0.25"])
        assert data["in_tetrahedron"] and data["in_octahedron"]
        assert data["separable"] is True

    def test_outside(self, capsys):
        data = run_json(capsys, ["geometry", "--c", "1,1,1"])
        assert not data["in_tetrahedron"]
        assert data["separable"] is None


class TestRun:
    def test_run_config(self, capsys):
        cfg = RunConfig(subcommand="compute", params=XStateParams.bell_diagonal(-0.5, -0.5, -0.5))
        assert run(cfg) == EXIT_OK
        assert_allclose(json.loads(capsys.readouterr().out)["discord"], 0.262483, atol=1e-5)
