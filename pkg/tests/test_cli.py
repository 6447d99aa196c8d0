"""CLI behavior: exit codes, JSON output, and the frozen golden report."""
from __future__ import annotations

import json
from importlib import resources

import numpy as np
import pytest

from spindual import cli
from spindual.models import build_tfim, cx_staircase, tfim_dual_target
from spindual.pauli import (
    Hamiltonian,
    PauliWord,
    hamiltonian_from_dict,
    hamiltonian_to_json,
)
from spindual.rotations import script_to_obj
from spindual.scenarios import CheckResult, run_scenario


def w(*pairs):
    return PauliWord.from_pairs(pairs)


def write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture
def tfim_file(tmp_path):
    return write(tmp_path / "tfim4.json", hamiltonian_to_json(build_tfim(4)))


@pytest.fixture
def staircase_file(tmp_path):
    payload = json.dumps(script_to_obj(cx_staircase(4)))
    return write(tmp_path / "stairs.json", payload)


class TestScenarioCommand:
    def test_list_names_every_scenario(self, capsys):
        assert cli.main(["scenario", "list"]) == 0
        out = capsys.readouterr().out
        for name in ("ising_self_dual", "netting_to_plaquettes"):
            assert name in out

    def test_run_pass_exit_zero(self, capsys):
        assert cli.main(["scenario", "run", "ising_self_dual", "--size", "4"]) == 0
        captured = capsys.readouterr()
        payload = json.loads(captured.out)
        assert payload["passed"] is True
        assert "PASS ising_self_dual" in captured.err

    def test_golden_report_byte_for_byte(self, capsys):
        assert cli.main(["scenario", "run", "ising_self_dual", "--size", "6"]) == 0
        out = capsys.readouterr().out
        golden = (
            resources.files("spindual")
            .joinpath("golden", "report_ising_self_dual_6.json")
            .read_text()
        )
        assert out == golden

    def test_out_dir_written(self, tmp_path, capsys):
        out_dir = tmp_path / "results"
        code = cli.main(
            ["scenario", "run", "cluster1d_decouple", "--size", "4",
             "--out", str(out_dir)]
        )
        assert code == 0
        path = out_dir / "report_cluster1d_decouple_4.json"
        assert json.loads(path.read_text())["passed"] is True
        assert json.loads(capsys.readouterr().out) == json.loads(path.read_text())

    def test_results_env_var_override(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv(cli.RESULTS_ENV, str(tmp_path / "env_results"))
        assert cli.main(["scenario", "run", "ising_self_dual", "--size", "4"]) == 0
        capsys.readouterr()
        assert (tmp_path / "env_results" / "report_ising_self_dual_4.json").exists()

    def test_check_failure_exits_one(self, capsys, monkeypatch):
        real = run_scenario

        def sabotaged(name, size=None, seed=None, params=None):
            report = real(name, size=size, seed=seed, params=params)
            failed = report.checks + (
                CheckResult("synthetic_probe", False, "injected failure"),
            )
            return type(report)(
                **{**report.__dict__, "checks": failed}
            )

        monkeypatch.setattr(cli, "run_scenario", sabotaged)
        assert cli.main(["scenario", "run", "ising_self_dual", "--size", "4"]) == 1
        captured = capsys.readouterr()
        assert "FAIL" in captured.err and "synthetic_probe" in captured.err
        assert json.loads(captured.out)["passed"] is False

    def test_invalid_size_exits_two(self, capsys):
        assert cli.main(["scenario", "run", "staggered_decouple", "--size", "7"]) == 2
        assert "even" in capsys.readouterr().err

    def test_unknown_name_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["scenario", "run", "no_such_thing"])
        assert exc.value.code == 2


class TestTransformCommand:
    def test_staircase_round_trip(self, tmp_path, tfim_file, staircase_file, capsys):
        out = tmp_path / "dual.json"
        code = cli.main(
            ["transform", "--hamiltonian", tfim_file, "--script", staircase_file,
             "--out", str(out)]
        )
        assert code == 0
        got = hamiltonian_from_dict(json.loads(out.read_text()))
        assert got == tfim_dual_target(4)

    def test_empty_script_canonicalizes(self, tmp_path, capsys):
        # Unsorted duplicate-word input comes back merged and sorted.
        raw = json.dumps(
            {
                "n_sites": 2,
                "terms": [
                    {"coeff": 1.0, "word": [[1, "Z"]]},
                    {"coeff": 2.0, "word": [[1, "Z"]]},
                    {"coeff": 0.5, "word": [[0, "X"]]},
                ],
            }
        )
        ham = write(tmp_path / "h.json", raw)
        script = write(tmp_path / "s.json", "[]")
        assert cli.main(["transform", "--hamiltonian", ham, "--script", script]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["terms"] == [
            {"coeff": 0.5, "word": [[0, "X"]]},
            {"coeff": 3.0, "word": [[1, "Z"]]},
        ]

    def test_out_of_range_step_exits_two(self, tmp_path, tfim_file, capsys):
        script = write(
            tmp_path / "bad.json", json.dumps([{"gate": "CZ", "sites": [0, 9]}])
        )
        code = cli.main(["transform", "--hamiltonian", tfim_file, "--script", script])
        assert code == 2
        assert "step 0" in capsys.readouterr().err


class TestSpectrumCommand:
    def test_single_site_field(self, tmp_path, capsys):
        ham = write(
            tmp_path / "h.json",
            hamiltonian_to_json(Hamiltonian.from_terms(1, [(-1.0, w((0, "X")))])),
        )
        assert cli.main(["spectrum", "--hamiltonian", ham]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["eigenvalues"] == [-1.0, 1.0]
        assert payload["gap"] == 2.0
        assert payload["ground_multiplicity"] == 1

    def test_k_limits_output(self, tmp_path, capsys):
        ham = write(tmp_path / "h.json", hamiltonian_to_json(build_tfim(5)))
        assert cli.main(["spectrum", "--hamiltonian", ham, "--k", "3"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["eigenvalues"]) == 3
        assert payload["complete"] is False

    def test_cap_violation_named(self, tmp_path, capsys):
        big = Hamiltonian.from_terms(13, [(1.0, w((0, "X")))])
        ham = write(tmp_path / "big.json", hamiltonian_to_json(big))
        assert cli.main(["spectrum", "--hamiltonian", ham]) == 2
        assert "cap" in capsys.readouterr().err


class TestGapscanCommand:
    def test_crossover(self, tmp_path, capsys):
        h0 = write(
            tmp_path / "h0.json",
            hamiltonian_to_json(Hamiltonian.from_terms(1, [(-1.0, w((0, "X")))])),
        )
        h1 = write(
            tmp_path / "h1.json",
            hamiltonian_to_json(Hamiltonian.from_terms(1, [(-1.0, w((0, "Z")))])),
        )
        assert cli.main(["gapscan", "--h0", h0, "--h1", h1, "--grid", "5"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["argmin_s"] == 0.5
        assert abs(payload["min_gap"] - np.sqrt(2)) < 1e-12
        assert len(payload["s_grid"]) == 5

    def test_size_mismatch_exits_two(self, tmp_path, capsys):
        h0 = write(tmp_path / "h0.json", hamiltonian_to_json(build_tfim(2)))
        h1 = write(tmp_path / "h1.json", hamiltonian_to_json(build_tfim(3)))
        assert cli.main(["gapscan", "--h0", h0, "--h1", h1]) == 2
        assert "size" in capsys.readouterr().err


class TestInputErrors:
    def test_malformed_json_reports_position(self, tmp_path, capsys):
        bad = write(tmp_path / "bad.json", '{"n_sites": 2,\n  "terms": [oops]}')
        assert cli.main(["spectrum", "--hamiltonian", bad]) == 2
        err = capsys.readouterr().err
        assert "line 2" in err and "column" in err

    def test_missing_file(self, tmp_path, capsys):
        assert cli.main(["spectrum", "--hamiltonian", str(tmp_path / "nope.json")]) == 2
        assert "no such file" in capsys.readouterr().err

    def test_unreadable_path_exits_two(self, tmp_path, capsys):
        # A path through a non-directory raises a different OSError than a
        # missing file; both must land on exit code 2, not a traceback.
        inner = write(tmp_path / "h.json", hamiltonian_to_json(build_tfim(2)))
        assert cli.main(["spectrum", "--hamiltonian", inner + "/x.json"]) == 2
        assert "Not a directory" in capsys.readouterr().err

    def test_unwritable_out_exits_two(self, tmp_path, capsys):
        h = write(tmp_path / "h.json", hamiltonian_to_json(build_tfim(2)))
        s = write(tmp_path / "s.json", "[]")
        bad_out = str(tmp_path / "h.json" / "out.json")
        assert cli.main(["transform", "--hamiltonian", h, "--script", s,
                         "--out", bad_out]) == 2
        assert "Not a directory" in capsys.readouterr().err

    def test_invalid_hamiltonian_payload(self, tmp_path, capsys):
        bad = write(
            tmp_path / "dup.json",
            json.dumps(
                {"n_sites": 2, "terms": [{"coeff": 1.0, "word": [[0, "X"], [0, "Z"]]}]}
            ),
        )
        assert cli.main(["spectrum", "--hamiltonian", bad]) == 2
        assert "repeated" in capsys.readouterr().err
