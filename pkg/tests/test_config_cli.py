"""Config parsing/validation and the CLI end to end (small instances)."""

import json

import pytest

from qvepair.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, main
from qvepair.config import SchemaError, parse_config

SHORT_PULSE = {"amplitude": 0.1, "carrier_frequency": 0.5, "width": 5.0}


def config_doc(**overrides):
    doc = {
        "schema_version": 1,
        "command": "spectrum",
        "field": {"pulses": [dict(SHORT_PULSE)]},
    }
    doc.update(overrides)
    return doc


class TestParseConfig:
    def test_minimal_defaults(self):
        cfg = parse_config(json.dumps(config_doc()))
        assert cfg.command == "spectrum"
        assert cfg.solver.rtol == 1e-8 and cfg.solver.atol == 1e-12
        assert cfg.solver.t_start is None  # resolved to -8 tau at solve time
        assert cfg.grid.n_par == 512 and cfg.grid.momentum_range is None

    def test_invalid_json(self):
        with pytest.raises(SchemaError) as err:
            parse_config("{not json")
        assert err.value.errors[0][0] == "/"

    def test_schema_violations_have_pointers(self):
        doc = config_doc()
        doc["field"]["pulses"][0]["width"] = "wide"
        doc["command"] = "frobnicate"
        with pytest.raises(SchemaError) as err:
            parse_config(json.dumps(doc))
        pointers = [ptr for ptr, _ in err.value.errors]
        assert "/command" in pointers
        assert "/field/pulses/0/width" in pointers

    def test_chirp_at_bound_rejected(self):
        doc = config_doc()
        doc["field"]["pulses"][0]["chirp"] = 0.1  # == omega/tau
        with pytest.raises(SchemaError) as err:
            parse_config(json.dumps(doc))
        assert any("chirp" in msg for _, msg in err.value.errors)

    def test_chirp_overrun_flag(self):
        doc = config_doc(allow_chirp_overrun=True)
        doc["field"]["pulses"][0]["chirp"] = 0.1
        cfg = parse_config(json.dumps(doc))
        assert cfg.allow_chirp_overrun

    def test_bad_window(self):
        doc = config_doc(solver={"t_start": 10.0, "t_end": -10.0})
        with pytest.raises(SchemaError) as err:
            parse_config(json.dumps(doc))
        assert any(ptr == "/solver" for ptr, _ in err.value.errors)

    def test_semantic_errors_are_collected_together(self):
        doc = config_doc(solver={"t_start": 10.0, "t_end": -10.0})
        doc["field"]["pulses"][0]["chirp"] = 0.1
        doc["grid"] = {"range": [2.0, -2.0]}
        with pytest.raises(SchemaError) as err:
            parse_config(json.dumps(doc))
        assert len(err.value.errors) >= 3

    def test_sweep_requires_payload(self):
        with pytest.raises(SchemaError) as err:
            parse_config(json.dumps(config_doc(command="sweep")))
        assert any(ptr == "/sweep" for ptr, _ in err.value.errors)

    def test_sweep_axis_must_increase(self):
        doc = config_doc(
            command="sweep",
            sweep={"kind": "chirp_magnitude", "axis": [0.02, 0.01]},
        )
        with pytest.raises(SchemaError) as err:
            parse_config(json.dumps(doc))
        assert any(ptr == "/sweep/axis" for ptr, _ in err.value.errors)

    def test_sign_combination_needs_two_pulses(self):
        doc = config_doc(
            command="sweep",
            sweep={"kind": "sign_combination", "axis": [0.0]},
        )
        with pytest.raises(SchemaError):
            parse_config(json.dumps(doc))


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc, indent=1))
    return str(path)


def small_spectrum_doc(out_dir, n_par=9):
    doc = config_doc(
        grid={"n_par": n_par, "range": [-1.0, 1.0]},
        solver={"rtol": 1e-7, "atol": 1e-11},
        output={"directory": str(out_dir), "overwrite": True},
    )
    return doc


class TestCli:
    def test_validate_ok_and_writes_nothing(self, tmp_path, capsys):
        cfg = write_config(tmp_path, small_spectrum_doc(tmp_path / "out"))
        assert main(["validate", "--config", cfg]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert not (tmp_path / "out").exists()

    def test_validate_bad_config(self, tmp_path, capsys):
        doc = small_spectrum_doc(tmp_path / "out")
        doc["field"]["pulses"][0]["chirp"] = 0.1
        cfg = write_config(tmp_path, doc)
        assert main(["validate", "--config", cfg]) == EXIT_VALIDATION
        assert "chirp" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        assert main(["validate", "--config", str(tmp_path / "nope.json")]) == EXIT_VALIDATION

    def test_subcommand_must_match_command(self, tmp_path):
        cfg = write_config(tmp_path, small_spectrum_doc(tmp_path / "out"))
        assert main(["density", "--config", cfg, "--quiet"]) == EXIT_VALIDATION

    def test_spectrum_end_to_end(self, tmp_path, capsys):
        out = tmp_path / "out"
        cfg = write_config(tmp_path, small_spectrum_doc(out))
        assert main(["spectrum", "--config", cfg, "--quiet"]) == EXIT_OK
        printed = capsys.readouterr().out.strip().splitlines()
        assert printed == [str(out / "spectrum.csv")]
        lines = (out / "spectrum.csv").read_text().splitlines()
        assert lines[0] == "P3,p_par_final,f"
        assert len(lines) == 10
        first = lines[1].split(",")
        assert float(first[0]) == -1.0  # 17-digit serialization round-trips
        assert float(first[2]) >= 0.0

    def test_overwrite_refused_without_flag(self, tmp_path):
        out = tmp_path / "out"
        doc = small_spectrum_doc(out)
        doc["output"]["overwrite"] = False
        cfg = write_config(tmp_path, doc)
        assert main(["spectrum", "--config", cfg, "--quiet"]) == EXIT_OK
        assert main(["spectrum", "--config", cfg, "--quiet"]) == EXIT_VALIDATION

    def test_density_end_to_end(self, tmp_path):
        out = tmp_path / "out"
        doc = small_spectrum_doc(out, n_par=33)
        doc["command"] = "density"
        cfg = write_config(tmp_path, doc)
        assert main(["density", "--config", cfg, "--quiet"]) == EXIT_OK
        report = json.loads((out / "density.json").read_text())
        assert report["mode"] == "reduced_1d"
        assert report["value"] >= 0.0
        assert report["grid"]["n_par"] == 33

    def test_sweep_thread_count_does_not_change_bytes(self, tmp_path):
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        doc = config_doc(
            command="sweep",
            grid={"n_par": 8, "range": [-1.0, 1.0]},
            solver={"rtol": 1e-7, "atol": 1e-11},
            sweep={"kind": "chirp_magnitude", "axis": [0.0, 0.02]},
            output={"directory": str(out1), "overwrite": True},
        )
        cfg = write_config(tmp_path, doc)
        assert main(["sweep", "--config", cfg, "--quiet", "--threads", "1"]) == EXIT_OK
        assert (
            main(["sweep", "--config", cfg, "--quiet", "--threads", "3", "--out", str(out2)])
            == EXIT_OK
        )
        assert (out1 / "sweep.csv").read_bytes() == (out2 / "sweep.csv").read_bytes()
        header = (out1 / "sweep.csv").read_text().splitlines()[0]
        assert header == "variant,axis_value,density,mode,n_grid"

    def test_oracle_check_passes_and_reports(self, tmp_path):
        out = tmp_path / "out"
        doc = config_doc(
            command="oracle-check",
            oracle={
                "step": 0.004,
                "t_start": -25.0,
                "t_end": 25.0,
                "momenta": [0.0],
                "tolerance": 1e-4,
            },
            solver={"rtol": 1e-10, "atol": 1e-16},
            output={"directory": str(out), "overwrite": True},
        )
        cfg = write_config(tmp_path, doc)
        assert main(["oracle-check", "--config", cfg, "--quiet"]) == EXIT_OK
        report = json.loads((out / "oracle_check.json").read_text())
        assert report["passed"] and report["max_rel_deviation"] <= 1e-4

    def test_oracle_check_numerical_failure_exit_code(self, tmp_path):
        out = tmp_path / "out"
        doc = config_doc(
            command="oracle-check",
            oracle={
                "step": 0.004,
                "t_start": -25.0,
                "t_end": 25.0,
                "momenta": [0.0],
                "tolerance": 1e-14,  # unreachable: forces the failure path
            },
            solver={"rtol": 1e-10, "atol": 1e-16},
            output={"directory": str(out), "overwrite": True},
        )
        cfg = write_config(tmp_path, doc)
        assert main(["oracle-check", "--config", cfg, "--quiet"]) == EXIT_NUMERICAL
