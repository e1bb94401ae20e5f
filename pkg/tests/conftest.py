from pathlib import Path

import pytest

from app.config import Settings
from app.schemas.corpus import Vocabulary
from app.services.corpus import generate_car_records, write_car_dataset
from tests.factories import make_doc


@pytest.fixture
def toy_labeled():
    return [
        make_doc("a1", ["engine", "fast", "fast"], "sport", price=30.0),
        make_doc("a2", ["engine", "fast", "wheel"], "sport", price=34.0),
        make_doc("b1", ["seat", "comfort", "comfort"], "family", price=18.0),
        make_doc("b2", ["seat", "comfort", "wheel"], "family", price=22.0),
    ]


@pytest.fixture
def toy_unlabeled():
    return [
        make_doc("u1", ["fast", "engine"]),
        make_doc("u2", ["comfort", "seat", "seat"]),
        make_doc("u3", ["wheel"]),
    ]


@pytest.fixture
def toy_vocab():
    return Vocabulary.from_words(["comfort", "engine", "fast", "seat", "wheel"])


@pytest.fixture
def car_dataset(tmp_path: Path) -> Path:
    """Generated car dataset with 300 rows (seed 7)"""
    return write_car_dataset(generate_car_records(7, 300), tmp_path / "car.csv")


@pytest.fixture
def settings(tmp_path: Path, car_dataset: Path) -> Settings:
    return Settings.load(
        tmp_path / "ssemc.env",
        dataset_path=car_dataset,
        output_dir=tmp_path / "output",
        labeled_size=30,
    )
