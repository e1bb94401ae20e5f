from pathlib import Path

import pandas as pd
import pytest
from typer.testing import CliRunner

from app.cli import app
from app.config import Settings
from app.constants import (
    EXIT_INTERNAL,
    EXIT_INVALID_FORMAT,
    EXIT_OK,
    EXIT_OUT_OF_DOMAIN,
    EXIT_USAGE,
)
from app.services.metrics import evaluate
from app.services.model import train_supervised
from app.services.store import load_model, save_model
from app.services.workflow import prepare

runner = CliRunner()


@pytest.fixture
def config_file(tmp_path: Path, car_dataset: Path) -> Path:
    path = tmp_path / "ssemc.env"
    path.write_text(
        f"dataset_path = {car_dataset}\n"
        f"output_dir = {tmp_path / 'output'}\n"
        "labeled_size = 30\n"
        "lambda = 1.0\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def cli(config_file):
    def invoke(*args: str):
        return runner.invoke(app, ["--config", str(config_file), *args])
    return invoke


@pytest.fixture
def toy_model_file(tmp_path, toy_labeled, toy_vocab) -> Path:
    return save_model(train_supervised(toy_labeled, toy_vocab), tmp_path / "toy.ssemc")


def write_doc(directory: Path, name: str, body: str) -> Path:
    path = directory / name
    path.write_text(body, encoding="utf-8")
    return path


class TestInit:
    def test_writes_loadable_config(self, tmp_path):
        path = tmp_path / "fresh.env"
        result = runner.invoke(app, ["--config", str(path), "--seed", "3", "init"])

        assert result.exit_code == EXIT_OK, result.output
        text = path.read_text(encoding="utf-8")
        assert "lambda = 1.0" in text
        assert "# stopword_path =" in text

        settings = Settings.load(path)
        assert settings.seed == 3
        assert settings.to_config_text() == text

    def test_refuses_to_overwrite(self, config_file):
        result = runner.invoke(app, ["--config", str(config_file), "init"])
        assert result.exit_code == EXIT_USAGE


class TestDatasetGen:
    def test_default_rows_and_determinism(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        for target in (first, second):
            result = runner.invoke(
                app, ["--config", str(tmp_path / "none.env"), "--seed", "7",
                      "dataset-gen", "--out", str(target)])
            assert result.exit_code == EXIT_OK, result.output

        assert len(first.read_text(encoding="utf-8").splitlines()) == 1501
        assert first.read_bytes() == second.read_bytes()

    def test_zero_rows_is_usage_error(self, tmp_path):
        result = runner.invoke(
            app, ["--config", str(tmp_path / "none.env"), "dataset-gen", "--rows", "0",
                  "--out", str(tmp_path / "x.csv")])
        assert result.exit_code == EXIT_USAGE
        assert not (tmp_path / "x.csv").exists()


class TestTrain:
    def test_writes_model_and_monotone_trace(self, cli, tmp_path):
        result = cli("train")
        assert result.exit_code == EXIT_OK, result.output

        output = tmp_path / "output"
        model = load_model(output / "model.ssemc")
        assert set(model.classes) == {"unacceptable", "good", "very good"}
        assert (output / "registry.csv").exists()

        trace = pd.read_csv(output / "trace.csv", float_precision="round_trip")
        assert list(trace.columns) == ["iteration", "objective", "max_resp_change"]
        assert trace["iteration"].tolist() == list(range(len(trace)))
        objectives = trace["objective"].tolist()
        assert all(b >= a - 1e-9 for a, b in zip(objectives, objectives[1:]))

    def test_zero_lambda_equals_supervised_only(self, cli, tmp_path):
        assert cli("--output-dir", str(tmp_path / "sup"), "train", "--supervised-only").exit_code == 0
        assert cli("--output-dir", str(tmp_path / "zero"), "train", "--lambda", "0").exit_code == 0

        supervised = (tmp_path / "sup" / "model.ssemc").read_bytes()
        assert (tmp_path / "zero" / "model.ssemc").read_bytes() == supervised

    def test_is_deterministic(self, cli, tmp_path):
        for name in ("run1", "run2"):
            assert cli("--output-dir", str(tmp_path / name), "train").exit_code == EXIT_OK

        for artifact in ("model.ssemc", "trace.csv", "registry.csv"):
            assert (tmp_path / "run1" / artifact).read_bytes() == \
                (tmp_path / "run2" / artifact).read_bytes()

    def test_missing_dataset(self, cli, tmp_path):
        missing = tmp_path / "nowhere.csv"
        result = cli("train", "--dataset", str(missing))
        assert result.exit_code == EXIT_USAGE
        assert str(missing) in result.output

    def test_invalid_setting(self, cli):
        result = cli("train", "--lambda", "2")
        assert result.exit_code == EXIT_USAGE
        assert "lambda" in result.output


class TestClassify:
    def test_known_document(self, cli, tmp_path, toy_model_file):
        doc = write_doc(tmp_path, "q.txt", "Fast engine, fast!")
        result = cli("classify", str(doc), "--model", str(toy_model_file))

        assert result.exit_code == EXIT_OK, result.output
        assert "q.txt Known sport p=" in result.output

    def test_verbose_prints_word_set_matches(self, cli, tmp_path):
        assert cli("train").exit_code == EXIT_OK
        doc = write_doc(tmp_path, "car.txt", "buying low maintenance low safety high")
        result = cli("classify", str(doc), "--verbose")

        assert result.exit_code == EXIT_OK, result.output
        assert "car.txt " in result.output
        assert "safety=" in result.output

    def test_other_formats_are_rejected(self, cli, tmp_path, toy_model_file):
        doc = tmp_path / "q.pdf"
        doc.write_bytes(b"%PDF-1.4 fast engine")
        result = cli("classify", str(doc), "--model", str(toy_model_file))
        assert result.exit_code == EXIT_INVALID_FORMAT

    def test_out_of_domain(self, cli, tmp_path, toy_model_file):
        doc = write_doc(tmp_path, "weather.txt", "The weather is sunny today")
        result = cli("classify", str(doc), "--model", str(toy_model_file))

        assert result.exit_code == EXIT_OUT_OF_DOMAIN
        assert "Known" not in result.output

    def test_novel_document_spawns_class(self, cli, tmp_path, toy_model_file):
        doc = write_doc(tmp_path, "odd.txt", "fast engine, price 90")
        result = cli("classify", str(doc), "--model", str(toy_model_file), "--spawn")

        assert result.exit_code == EXIT_OK, result.output
        assert "odd.txt Novel novel-1 p=" in result.output
        assert "novel-1" in load_model(toy_model_file).classes
        registry = (tmp_path / "output" / "registry.csv").read_text(encoding="utf-8")
        assert "novel-1,spawned," in registry

    def test_missing_model(self, cli, tmp_path):
        doc = write_doc(tmp_path, "q.txt", "fast engine")
        result = cli("classify", str(doc), "--model", str(tmp_path / "absent.ssemc"))
        assert result.exit_code == EXIT_USAGE

    def test_several_documents_in_path_order(self, cli, config_file, tmp_path, toy_model_file):
        with config_file.open("a", encoding="utf-8") as f:
            f.write("workers = 3\n")
        docs = [
            write_doc(tmp_path, "odd.txt", "fast engine, price 90"),
            write_doc(tmp_path, "b.txt", "Fast engine, fast!"),
            write_doc(tmp_path, "a.txt", "Fast engine, fast!"),
        ]
        result = cli("classify", *map(str, docs), "--model", str(toy_model_file), "--spawn")

        assert result.exit_code == EXIT_OK, result.output
        lines = [line for line in result.output.splitlines() if " p=" in line]
        assert [line.split()[0] for line in lines] == ["a.txt", "b.txt", "odd.txt"]
        assert lines[0].startswith("a.txt Known sport")
        assert lines[2].startswith("odd.txt Novel novel-1")

    def test_rejected_document_stops_the_whole_batch(self, cli, tmp_path, toy_model_file):
        odd = write_doc(tmp_path, "odd.txt", "fast engine, price 90")
        weather = write_doc(tmp_path, "weather.txt", "The weather is sunny today")
        result = cli(
            "classify", str(odd), str(weather), "--model", str(toy_model_file), "--spawn")

        assert result.exit_code == EXIT_OUT_OF_DOMAIN
        assert "novel-1" not in load_model(toy_model_file).classes
        assert not (tmp_path / "output" / "registry.csv").exists()


class TestEvaluate:
    def test_matches_library_evaluation(self, cli, config_file, tmp_path):
        assert cli("train").exit_code == EXIT_OK
        result = cli("evaluate")
        assert result.exit_code == EXIT_OK, result.output

        settings = Settings.load(config_file)
        expected = evaluate(load_model(settings.model_path), prepare(settings).test)
        metrics = pd.read_csv(settings.metrics_path).set_index("class")

        assert metrics.loc["accuracy", "precision"] == pytest.approx(expected.accuracy)
        assert metrics.loc["macro", "f1"] == pytest.approx(expected.macro_f1)
        assert f"accuracy {expected.accuracy:.4f}" in result.output

    def test_is_deterministic(self, cli, tmp_path):
        assert cli("train").exit_code == EXIT_OK
        assert cli("evaluate").exit_code == EXIT_OK
        first = (tmp_path / "output" / "metrics.csv").read_bytes()
        assert cli("evaluate").exit_code == EXIT_OK
        assert (tmp_path / "output" / "metrics.csv").read_bytes() == first

    def test_empty_test_split(self, tmp_path, toy_model_file):
        dataset = tmp_path / "one.csv"
        dataset.write_text(
            "buying,maintenance,price,mileage,safety,class\nhigh,high,12.5,20,low,good\n",
            encoding="utf-8",
        )
        config = tmp_path / "one.env"
        config.write_text(
            f"dataset_path = {dataset}\noutput_dir = {tmp_path / 'out'}\nlabeled_size = 1\n",
            encoding="utf-8",
        )

        result = runner.invoke(
            app, ["--config", str(config), "evaluate", "--model", str(toy_model_file)])
        assert result.exit_code == EXIT_INTERNAL
        assert "EmptyEvaluation" in result.output


class TestCompare:
    def test_writes_one_row_per_size(self, cli, tmp_path):
        result = cli("compare", "--sizes", "5,20,60")
        assert result.exit_code == EXIT_OK, result.output

        table = pd.read_csv(tmp_path / "output" / "comparison.csv")
        assert table["n"].tolist() == [5, 20, 60]
        assert table[["accuracy_supervised", "accuracy_semisupervised"]].le(1.0).all().all()

    def test_is_deterministic(self, cli, tmp_path):
        path = tmp_path / "output" / "comparison.csv"
        assert cli("compare", "--sizes", "10,30").exit_code == EXIT_OK
        first = path.read_bytes()
        assert cli("compare", "--sizes", "10,30").exit_code == EXIT_OK
        assert path.read_bytes() == first

    def test_whole_train_half_leaves_no_unlabeled_documents(self, cli, tmp_path):
        assert cli("compare", "--sizes", "150").exit_code == EXIT_OK
        row = pd.read_csv(tmp_path / "output" / "comparison.csv").iloc[0]
        assert row["accuracy_supervised"] == row["accuracy_semisupervised"]
        assert row["f1_supervised"] == row["f1_semisupervised"]

    def test_oversized_ladder(self, cli):
        result = cli("compare", "--sizes", "10,5000")
        assert result.exit_code == EXIT_INTERNAL
        assert "InsufficientData" in result.output
