from pathlib import Path

import pytest
from pydantic import ValidationError

from app.config import Settings


@pytest.fixture
def config_path(tmp_path) -> Path:
    path = tmp_path / "run.env"
    path.write_text("seed = 11\nlambda = 0.25\noutput_dir = results\n", encoding="utf-8")
    return path


def test_defaults_without_file(tmp_path):
    settings = Settings.load(tmp_path / "absent.env")
    assert settings.seed == 7
    assert settings.unlabeled_weight == 1.0
    assert settings.stopword_path is None
    assert settings.model_path == Path("output") / "model.ssemc"


def test_file_values_and_lambda_alias(config_path):
    settings = Settings.load(config_path)
    assert settings.seed == 11
    assert settings.unlabeled_weight == 0.25
    assert settings.em_config.unlabeled_weight == 0.25
    assert settings.trace_path == Path("results") / "trace.csv"


def test_precedence(config_path, monkeypatch):
    monkeypatch.setenv("SEED", "99")
    monkeypatch.setenv("ZSCORE_K", "2.5")

    settings = Settings.load(config_path)
    assert settings.seed == 11
    assert settings.zscore_k == 2.5

    overridden = Settings.load(config_path, seed=5, alpha=None, **{"lambda": 0.0})
    assert overridden.seed == 5
    assert overridden.alpha == 1.0
    assert overridden.unlabeled_weight == 0.0


def test_config_text_round_trip(tmp_path, config_path):
    text = Settings.load(config_path).to_config_text()
    assert "# stopword_path =" in text
    assert "lambda = 0.25" in text

    copy = tmp_path / "copy.env"
    copy.write_text(text, encoding="utf-8")
    assert Settings.load(copy).to_config_text() == text


@pytest.mark.parametrize(
    "line",
    ["lambda = 1.5", "alpha = 0", "novelty_threshold = 1", "labeled_size = 0", "log_level = LOUD"],
)
def test_out_of_range_values(tmp_path, line):
    path = tmp_path / "bad.env"
    path.write_text(line + "\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        Settings.load(path)
