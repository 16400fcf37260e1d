"""End-to-end tests for the tskan command line."""

import json

import pandas as pd
import pytest
from rich.console import Console

from src.config.settings import SEED_ENV_VAR
from src.main import build_parser, main
from src.models.pipeline import RmseMetrics
from src.output.manifest import RUN_MANIFEST_FILE
from src.output.reporter import print_rmse_table

QUICK_CONFIG = {
    "data": {"max_length": 8, "label_range": None},
    "selection": {"k": 4},
    "train": {"epochs": 30, "early_stop_patience": 30},
    "baselines": {"max_iter": 2000},
    "explain": {"n_points": 20},
    "synth": {"N": 120, "T": 8},
}


@pytest.fixture
def config_file(tmp_path, monkeypatch):
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    path = tmp_path / "quick.json"
    path.write_text(json.dumps(QUICK_CONFIG), encoding="utf-8")
    return path


def run(command, out_dir, config_file, *extra):
    argv = [command, "--config", str(config_file), "--out", str(out_dir), "--quiet", "--no-log-file", *extra]
    return main([str(a) for a in argv])


def manifest(out_dir):
    return json.loads((out_dir / RUN_MANIFEST_FILE).read_text(encoding="utf-8"))


@pytest.fixture
def trained(tmp_path, config_file):
    """Output directory after synth and train with seed 7."""
    out = tmp_path / "out"
    assert run("synth", out, config_file, "--seed", 7) == 0
    assert run("train", out, config_file, "--seed", 7, "--data", out / "synthetic.csv") == 0
    return out


class TestSynthCommand:
    """Tests for tskan synth."""

    def test_writes_dataset_and_truth(self, tmp_path, config_file):
        out = tmp_path / "out"
        assert run("synth", out, config_file, "--n", 40) == 0
        frame = pd.read_csv(out / "synthetic.csv")
        assert frame["sample_id"].nunique() == 40
        assert len(frame) == 40 * 8
        assert set(manifest(out)["artifacts"]) == {"synthetic.csv", "ground_truth.json"}
        assert manifest(out)["seeds"]["run"] == 0

    def test_invalid_override(self, tmp_path, config_file):
        assert run("synth", tmp_path / "out", config_file, "--t", 2) == 2


class TestTrainCommand:
    """Tests for tskan train."""

    def test_artifacts(self, trained):
        """Test models, report and importance table are written and hashed."""
        artifacts = manifest(trained)["artifacts"]
        assert set(artifacts) == {"model.json", "importance.csv", "ols.json", "lasso.json", "report.json"}
        report = json.loads((trained / "report.json").read_text(encoding="utf-8"))
        assert len(report["selected_features"]) == 4
        assert set(report["baselines"]) == {"ols", "lasso"}
        assert report["seeds"]["split"] == 7

    def test_byte_identical_reruns(self, tmp_path, config_file, trained):
        """Test the same inputs and seed reproduce every artifact hash."""
        again = tmp_path / "again"
        data = trained / "synthetic.csv"
        assert run("train", again, config_file, "--seed", 7, "--data", data) == 0
        assert manifest(again)["artifacts"] == manifest(trained)["artifacts"]

    def test_missing_data(self, tmp_path, config_file):
        assert run("train", tmp_path / "out", config_file, "--data", tmp_path / "absent.csv") == 3

    def test_no_data_configured(self, tmp_path, config_file):
        assert run("train", tmp_path / "out", config_file) == 2

    def test_bad_config(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"unknown": {}}), encoding="utf-8")
        assert run("train", tmp_path / "out", path, "--data", tmp_path / "x.csv") == 2

    def test_output_path_is_file(self, tmp_path, config_file):
        blocker = tmp_path / "blocker"
        blocker.write_text("x")
        assert run("synth", blocker, config_file) == 5


class TestSelectCommand:
    """Tests for tskan select."""

    def test_importance_outputs(self, tmp_path, config_file):
        out = tmp_path / "out"
        run("synth", out, config_file)
        assert run("select", out, config_file, "--data", out / "synthetic.csv") == 0
        payload = json.loads((out / "importance.json").read_text(encoding="utf-8"))
        assert payload["k"] == 4
        assert payload["selected_features"] == [r["name"] for r in payload["importance"][:4]]
        assert len(pd.read_csv(out / "importance.csv")) == 18


class TestEvaluateCommand:
    """Tests for tskan evaluate."""

    def test_default_models(self, trained, config_file):
        assert run("evaluate", trained, config_file, "--data", trained / "synthetic.csv", "--seed", 7) == 0
        evaluation = json.loads((trained / "evaluation.json").read_text(encoding="utf-8"))
        assert set(evaluation) == {"model.json", "ols.json", "lasso.json"}
        assert evaluation["model.json"]["type"] == "kan"
        assert evaluation["model.json"]["parameters"] == 48

    def test_no_models(self, tmp_path, config_file):
        assert run("evaluate", tmp_path / "empty", config_file, "--data", tmp_path / "x.csv") == 3


class TestExplainCommand:
    """Tests for tskan explain."""

    def test_exports(self, trained, config_file):
        assert run("explain", trained, config_file) == 0
        explain = trained / "explain"
        listed = json.loads((explain / "manifest.json").read_text(encoding="utf-8"))
        assert all((explain / name).is_file() for name in listed)
        assert (explain / "phase_illustration.svg").is_file()
        assert "explain/importance.csv" in manifest(trained)["artifacts"]
        assert len(pd.read_csv(explain / listed[0])) == 20


class TestPredictCommand:
    """Tests for tskan predict."""

    def test_predictions(self, trained, config_file):
        data = trained / "synthetic.csv"
        assert run("predict", trained, config_file, "--model", trained / "model.json", "--data", data) == 0
        frame = pd.read_csv(trained / "predictions.csv")
        assert list(frame.columns) == ["sample_id", "prediction"]
        assert len(frame) == 120

    def test_schema_mismatch(self, trained, config_file, tmp_path):
        """Test a dataset without the model's variables exits with a data error."""
        other = tmp_path / "other.csv"
        other.write_text("sample_id,chunk_index,a,mos\ns1,0,1.0,0.0\n", encoding="utf-8")
        assert run("predict", trained, config_file, "--model", trained / "model.json", "--data", other) == 3

    def test_model_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["predict", "--data", "x.csv"])


class TestReporter:
    """Tests for the rich RMSE table."""

    def test_table_rows(self):
        console = Console(record=True, width=120)
        print_rmse_table([("TSKAN", RmseMetrics(0.1, 0.2, 0.3), 48)], console=console)
        text = console.export_text()
        assert "TSKAN" in text and "0.3000" in text and "48" in text
