import csv
import json

import numpy as np
import pytest

from app.cli.main import main


@pytest.fixture
def write_spec(tmp_path):
    def write(algebra, metric, task=None, name="spec.json"):
        doc = {"algebra": algebra, "metric": metric}
        if task is not None:
            doc["task"] = task
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return write


@pytest.fixture
def run_cli(capsys):
    def run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        report = json.loads(captured.out) if captured.out.strip() else None
        return code, report, captured.err
    return run


def without_timestamp(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "generatedAt"}


# =============================================================================
# validate
# =============================================================================


class TestValidateCommand:
    def test_valid_builtin(self, write_spec, run_cli):
        code, report, _ = run_cli("validate", write_spec({"builtin": "heis3"}, {"preset": "lorentz"}))
        assert code == 0
        assert report["ok"] is True
        assert report["nilpotencyStep"] == 2
        assert report["lowerCentralSeries"] == [3, 1, 0]
        assert report["signature"] == [1, 2]
        assert "generatedAt" in report

    def test_jacobi_failure(self, write_spec, run_cli):
        algebra = {"dim": 3, "brackets": [
            {"i": 1, "j": 2, "coeffs": [0, 0, 1]},
            {"i": 1, "j": 3, "coeffs": [1, 0, 0]},
        ]}
        code, report, _ = run_cli("validate", write_spec(algebra, {"matrix": np.eye(3).tolist()}))
        assert code == 2
        assert report["ok"] is False
        assert any(v["kind"] == "jacobi" for v in report["violations"])

    def test_invalid_spec(self, write_spec, run_cli):
        code, report, err = run_cli("validate", write_spec({"builtin": "aff"}, {"matrix": np.eye(3).tolist()}))
        assert code == 2
        assert report is None
        assert "metric.matrix" in json.loads(err.strip().splitlines()[-1])["detail"]


# =============================================================================
# geodesic / growth / idempotent / clairaut
# =============================================================================


class TestAnalysisCommands:
    def test_geodesic_blowup_with_csv(self, write_spec, run_cli, tmp_path):
        out = tmp_path / "traj.csv"
        code, report, _ = run_cli(
            "geodesic", write_spec({"builtin": "aff"}, {"preset": "g-1"}),
            "--x0", "1,1", "--tmax", "2", "--csv", str(out),
        )
        assert code == 0
        assert report["status"]["kind"] == "Blowup"
        assert report["status"]["tLow"] <= 1.0 <= report["status"]["tHigh"]
        with out.open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "x_1", "x_2", "energy", "c_1", "c_2", "step"]
        assert len(rows) == report["samples"] + 1

    def test_geodesic_bad_velocity(self, write_spec, run_cli):
        code, _, err = run_cli("geodesic", write_spec({"builtin": "aff"}, {"preset": "g-1"}), "--x0", "1,1,1")
        assert code == 2
        assert "--x0" in err

    def test_growth(self, write_spec, run_cli):
        code, report, _ = run_cli(
            "growth", write_spec({"builtin": "n4"}, {"preset": "euclidean"}), "--dir", "1,0,0,0",
        )
        assert code == 0
        assert report["report"]["fit"] == {"kind": "Polynomial", "degree": 2, "rate": None, "reason": None}

    def test_growth_grid_from_task(self, write_spec, run_cli):
        path = write_spec({"builtin": "aff"}, {"preset": "g1"}, {"tGrid": "log:1,5,10"})
        code, report, _ = run_cli("growth", path, "--dir", "1,0")
        assert code == 0
        assert len(report["report"]["times"]) == 10
        assert report["report"]["fit"]["kind"] == "Undetermined"

    def test_growth_overflow_truncates(self, write_spec, run_cli):
        code, report, _ = run_cli(
            "growth", write_spec({"builtin": "aff"}, {"preset": "g1"}), "--dir", "1,0", "--tgrid", "log:1,1000,40",
        )
        assert code == 0
        assert report["report"]["truncated"] is True
        assert len(report["report"]["times"]) < 40

    def test_idempotent(self, write_spec, run_cli):
        code, report, _ = run_cli(
            "idempotent", write_spec({"builtin": "aff"}, {"preset": "g-1"}), "--restarts", "16", "--seed", "2",
        )
        assert code == 0
        assert report["restarts"] == 16
        roots = [doc["x0"] for doc in report["idempotents"]]
        assert np.allclose(roots, [[1.0, 1.0], [1.0, -1.0]], atol=1e-8)
        assert all(doc["selfProduct"] == pytest.approx(0.0, abs=1e-8) for doc in report["idempotents"])

    def test_clairaut_curve(self, write_spec, run_cli, tmp_path):
        out = tmp_path / "spectrum.csv"
        code, report, _ = run_cli(
            "clairaut", write_spec({"builtin": "aff"}, {"preset": "g0"}), "--curve", "h0-ray", "--csv", str(out),
        )
        assert code == 0
        assert report["length"]["length"] == pytest.approx(1.0, abs=1e-5)
        assert report["points"] == 121
        assert out.read_text().splitlines()[0] == "param,lamMinSq,lamMaxSq,det"

    def test_clairaut_points(self, write_spec, run_cli, tmp_path):
        points = tmp_path / "points.json"
        points.write_text(json.dumps([np.eye(2).tolist(), np.diag([1.0, 0.5]).tolist()]))
        code, report, _ = run_cli(
            "clairaut", write_spec({"builtin": "aff"}, {"preset": "g-1"}), "--points", str(points),
        )
        assert code == 0
        assert report["lamMinSq"] == pytest.approx(0.25)
        assert report["lamMaxSq"] == pytest.approx(1.0)
        assert report["length"] is None

    def test_clairaut_diverging_hyperbola(self, write_spec, run_cli):
        code, report, _ = run_cli(
            "clairaut", write_spec({"builtin": "aff"}, {"preset": "g-1"}), "--curve", "h-1-diverging",
        )
        assert code == 0
        assert report["length"]["length"] == pytest.approx(np.pi / 2, abs=1e-6)

    def test_clairaut_curve_needs_aff(self, write_spec, run_cli):
        code, _, _ = run_cli("clairaut", write_spec({"builtin": "heis3"}, {"preset": "euclidean"}), "--curve", "h0-ray")
        assert code == 2


# =============================================================================
# verdict / repro-aff / global options
# =============================================================================


class TestVerdictCommand:
    def test_incomplete(self, write_spec, run_cli):
        code, report, _ = run_cli("verdict", write_spec({"builtin": "aff"}, {"preset": "g-1"}))
        assert code == 0
        assert report["verdict"] == "IncompleteCertified"
        assert report["witness"]["kind"] == "idempotent"
        assert report["witness"]["blowupTime"] == 1.0

    def test_certified(self, write_spec, run_cli):
        code, report, _ = run_cli("verdict", write_spec({"builtin": "e2"}, {"matrix": np.diag([-1.0, 1.0, 1.0]).tolist()}))
        assert code == 0
        assert report["certificate"] == "pseudo-compact-semidirect"

    def test_deterministic(self, write_spec, run_cli):
        path = write_spec({"builtin": "aff"}, {"preset": "g0"}, {"seed": 5})
        _, first, _ = run_cli("verdict", path)
        _, second, _ = run_cli("verdict", path)
        assert without_timestamp(first) == without_timestamp(second)


class TestGlobalOptions:
    def test_repro_aff(self, run_cli):
        code, report, _ = run_cli("repro-aff", "--seed", "0")
        assert code == 0
        assert report["failed"] == 0
        assert report["passed"] == len(report["checks"])

    def test_metrics_file(self, write_spec, run_cli, tmp_path):
        metrics = tmp_path / "metrics.prom"
        code, _, _ = run_cli(
            "--metrics-file", str(metrics), "validate", write_spec({"builtin": "so3"}, {"preset": "euclidean"}),
        )
        assert code == 0
        text = metrics.read_text()
        assert 'cli_commands_total{command="validate",exit_code="0"}' in text

    def test_unknown_command(self, run_cli):
        with pytest.raises(SystemExit) as excinfo:
            run_cli("frobnicate")
        assert excinfo.value.code == 2
