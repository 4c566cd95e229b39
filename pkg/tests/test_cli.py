"""CLI contract tests: outputs, manifests, exit codes, determinism."""

import hashlib
import json

import numpy as np
import pytest

from laddertangle import cli
from laddertangle.experiments import baseline_params
from laddertangle.model import params_to_config
from laddertangle.tables import SpectrumTable


@pytest.fixture()
def fast_config(tmp_path, fast_doppler):
    params = baseline_params(p=0.5, doppler=fast_doppler)
    path = tmp_path / "params.json"
    path.write_text(json.dumps(params_to_config(params)), encoding="utf-8")
    return path


def _run(args):
    return cli.main([str(a) for a in args])


class TestRun:
    def test_writes_csv_and_manifest(self, tmp_path, fast_config):
        out = tmp_path / "out"
        code = _run(["run", "--config", fast_config, "--out", out,
                     "--jobs", 1, "--delta1-min", -20, "--delta1-max", 20,
                     "--delta1-points", 5])
        assert code == 0
        csv_path = out / "custom.csv"
        manifest_path = out / "custom.manifest.json"
        assert csv_path.exists() and manifest_path.exists()
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        digest = hashlib.sha256(csv_path.read_bytes()).hexdigest()
        assert manifest["files"][csv_path.name] == digest
        assert manifest["grid"] == {"min": -20.0, "max": 20.0, "points": 5}
        assert manifest["jobs"] == 1
        table = SpectrumTable.read_csv(csv_path)
        assert len(table.delta1) == 5
        assert np.all(np.isfinite(table.v12))

    def test_csv_round_trips_exactly(self, tmp_path, fast_config):
        out = tmp_path / "out"
        _run(["run", "--config", fast_config, "--out", out, "--jobs", 1,
              "--delta1-min", -20, "--delta1-max", 20, "--delta1-points", 5])
        csv_path = out / "custom.csv"
        table = SpectrumTable.read_csv(csv_path)
        again = tmp_path / "again.csv"
        table.write_csv(again)
        assert again.read_bytes() == csv_path.read_bytes()

    def test_jobs_do_not_change_bytes(self, tmp_path, fast_config):
        outs = []
        for jobs in (1, 3):
            out = tmp_path / f"out{jobs}"
            code = _run(["run", "--config", fast_config, "--out", out,
                         "--jobs", jobs, "--delta1-min", -20,
                         "--delta1-max", 20, "--delta1-points", 7])
            assert code == 0
            outs.append((out / "custom.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_unknown_scenario_exit_2(self, tmp_path, capsys):
        code = _run(["run", "--scenario", "fig9-z", "--out", tmp_path / "o"])
        assert code == 2
        assert "unknown scenario" in capsys.readouterr().err

    def test_partial_grid_flags_exit_2(self, tmp_path, fast_config):
        code = _run(["run", "--config", fast_config, "--out", tmp_path / "o",
                     "--delta1-min", -20])
        assert code == 2

    def test_decreasing_grid_exit_2(self, tmp_path, fast_config):
        code = _run(["run", "--config", fast_config, "--out", tmp_path / "o",
                     "--delta1-min", 20, "--delta1-max", -20,
                     "--delta1-points", 5])
        assert code == 2

    def test_bad_config_exit_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"schema_version": 1,
                                   "decay": {"gamma1": "fast"}}),
                       encoding="utf-8")
        code = _run(["run", "--config", bad, "--out", tmp_path / "o"])
        assert code == 2

    def test_grid_on_pump_sweep_exit_2(self, tmp_path):
        code = _run(["run", "--scenario", "fig3", "--out", tmp_path / "o",
                     "--delta1-min", -20, "--delta1-max", 20,
                     "--delta1-points", 5])
        assert code == 2

    def test_jobs_env_var(self, tmp_path, fast_config, monkeypatch):
        monkeypatch.setenv("LADDERTANGLE_JOBS", "2")
        out = tmp_path / "out"
        code = _run(["run", "--config", fast_config, "--out", out,
                     "--delta1-min", -20, "--delta1-max", 20,
                     "--delta1-points", 3])
        assert code == 0
        manifest = json.loads((out / "custom.manifest.json").read_text())
        assert manifest["jobs"] == 2

    def test_bad_jobs_env_var_exit_2(self, tmp_path, fast_config, monkeypatch):
        monkeypatch.setenv("LADDERTANGLE_JOBS", "many")
        code = _run(["run", "--config", fast_config, "--out", tmp_path / "o",
                     "--delta1-min", -20, "--delta1-max", 20,
                     "--delta1-points", 3])
        assert code == 2


class TestValidate:
    def test_validate_passes_and_writes_report(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        code = _run(["validate", "--out", report_path])
        assert code == 0
        report = json.loads(report_path.read_text(encoding="utf-8"))
        assert report["passed"] is True
        assert all(c["passed"] for c in report["checks"])
        stdout = capsys.readouterr().out
        assert json.loads(stdout)["passed"] is True

    def test_validate_failure_exit_1(self, monkeypatch, capsys):
        from laddertangle import validation

        failing = validation.CheckResult(name="forced", passed=False,
                                         detail="forced failure")
        monkeypatch.setattr(validation, "run_all", lambda: [failing])
        code = _run(["validate"])
        assert code == 1
        assert "[FAIL] forced" in capsys.readouterr().err


class TestFeatureReport:
    def test_classifies_dip(self, tmp_path, capsys):
        axis = np.linspace(-100.0, 100.0, 401)
        dip = 5.0 - 1.0 * 9.0 / (9.0 + axis ** 2)
        nan = np.full_like(axis, np.nan)
        table = SpectrumTable(delta1=axis, v12=dip, du2=dip, dv2=dip,
                              absorption=nan)
        csv_path = tmp_path / "spec.csv"
        table.write_csv(csv_path)
        code = _run(["feature-report", csv_path, "--half-width", 10])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["kind"] == "dip"
        assert abs(report["location"]) < 1.0

    def test_missing_file_exit_2(self, tmp_path, capsys):
        code = _run(["feature-report", tmp_path / "missing.csv"])
        assert code == 2
        assert "cannot read" in capsys.readouterr().err

    def test_garbage_csv_exit_2(self, tmp_path):
        path = tmp_path / "garbage.csv"
        path.write_text("not,a,spectrum\n1,2,3\n", encoding="utf-8")
        assert _run(["feature-report", path]) == 2

    def test_nan_column_exit_2(self, tmp_path, capsys):
        axis = np.linspace(-50.0, 50.0, 101)
        nan = np.full_like(axis, np.nan)
        table = SpectrumTable(delta1=axis, v12=np.ones_like(axis),
                              du2=nan, dv2=nan, absorption=nan)
        csv_path = tmp_path / "spec.csv"
        table.write_csv(csv_path)
        code = _run(["feature-report", csv_path, "--column", "absorption"])
        assert code == 2
        assert "missing values" in capsys.readouterr().err


class TestListScenarios:
    def test_lists_all(self, capsys):
        assert _run(["list-scenarios"]) == 0
        out = capsys.readouterr().out
        for name in ("fig2-a", "fig2-h", "fig3", "fig4-d"):
            assert name in out
        assert "pump-sweep" in out
