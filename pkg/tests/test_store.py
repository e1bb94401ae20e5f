import math

import numpy as np
import pytest

from app.constants import PREDEFINED_CLASSES
from app.exceptions import CorruptModel, DuplicateClass, StoreIoError
from app.schemas.registry import ClassOrigin
from app.services.model import classify, train_supervised
from app.services.store import (
    RegistryStore,
    append_class,
    dumps_model,
    dumps_registry,
    load_model,
    loads_model,
    loads_registry,
    save_model,
)
from app.utils import files
from tests.factories import make_doc


def assert_same_model(a, b):
    assert a.classes == b.classes
    assert a.vocab.words == b.vocab.words
    assert a.smoothing_alpha == b.smoothing_alpha
    assert np.array_equal(a.log_priors, b.log_priors)
    assert np.array_equal(a.log_conditionals, b.log_conditionals)
    assert np.array_equal(a.class_weights, b.class_weights)
    assert np.array_equal(a.word_weights, b.word_weights)
    assert a.attribute_stats == b.attribute_stats


@pytest.fixture
def toy_model(toy_labeled, toy_vocab):
    return train_supervised(toy_labeled, toy_vocab, alpha=0.5)


class TestModelFile:
    def test_round_trip(self, tmp_path, toy_model):
        path = save_model(toy_model, tmp_path / "model.ssemc")
        loaded = load_model(path)

        assert_same_model(loaded, toy_model)
        label, _ = classify(loaded, make_doc("q", ["fast", "engine"]))
        assert label == "sport"

    def test_saving_twice_is_byte_identical(self, tmp_path, toy_model):
        first = save_model(toy_model, tmp_path / "a.ssemc")
        second = save_model(toy_model, tmp_path / "b.ssemc")
        assert first.read_bytes() == second.read_bytes()

    def test_layout(self, toy_model):
        lines = dumps_model(toy_model).splitlines()
        assert lines[0] == "ssemc-model v1"
        assert lines[2] == "classes 2"
        assert lines[5:11] == ["vocabulary 5", "comfort", "engine", "fast", "seat", "wheel"]
        assert lines[11] == "conditional family"

    def test_unwritable_path(self, tmp_path, toy_model):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory", encoding="utf-8")
        with pytest.raises(StoreIoError):
            save_model(toy_model, blocker / "model.ssemc")

    def test_missing_file(self, tmp_path):
        with pytest.raises(StoreIoError):
            load_model(tmp_path / "absent.ssemc")

    def test_priors_must_sum_to_one(self, toy_model):
        lines = dumps_model(toy_model).splitlines()
        name, _, weight = lines[3].split("\t")
        lines[3] = "\t".join([name, math.log(0.3).hex(), weight])

        with pytest.raises(CorruptModel, match="priors"):
            loads_model("\n".join(lines) + "\n")

    @pytest.mark.parametrize("value", ["nan", "inf", "-inf"])
    def test_non_finite_conditionals(self, toy_model, value):
        lines = dumps_model(toy_model).splitlines()
        start = lines.index("conditional sport") + 1
        for i in range(start, start + len(toy_model.vocab)):
            word, _, weight = lines[i].split("\t")
            lines[i] = "\t".join([word, value, weight])

        with pytest.raises(CorruptModel) as excinfo:
            loads_model("\n".join(lines) + "\n")
        assert excinfo.value.line == start + 1

    def test_invalid_parameters_are_reported(self, toy_model):
        nan_rows = np.full_like(toy_model.log_conditionals, np.nan)
        broken = toy_model.model_copy(update={"log_conditionals": nan_rows})
        assert any("non-finite" in e for e in broken.normalization_errors())

        negative = toy_model.model_copy(update={"class_weights": -toy_model.class_weights})
        assert any("negative" in e for e in negative.normalization_errors())

        bad_std = toy_model.model_copy(update={"attribute_stats": {"price": (26.0, -1.0)}})
        assert bad_std.normalization_errors()

    def test_unknown_version(self, toy_model):
        text = dumps_model(toy_model).replace("ssemc-model v1", "ssemc-model v9", 1)
        with pytest.raises(CorruptModel) as excinfo:
            loads_model(text)
        assert excinfo.value.line == 1

    def test_truncated_file(self, toy_model):
        text = dumps_model(toy_model)
        with pytest.raises(CorruptModel):
            loads_model(text[: len(text) // 2])

    def test_trailing_content(self, toy_model):
        with pytest.raises(CorruptModel):
            loads_model(dumps_model(toy_model) + "extra\n")

    def test_bad_float(self, toy_model):
        lines = dumps_model(toy_model).splitlines()
        lines[1] = "alpha not-a-number"
        with pytest.raises(CorruptModel) as excinfo:
            loads_model("\n".join(lines))
        assert excinfo.value.line == 2


class TestRegistry:
    def test_missing_file_gives_predefined_classes(self, tmp_path):
        registry = RegistryStore(tmp_path / "registry.csv").load()
        assert registry.names == PREDEFINED_CLASSES
        assert registry.spawned_count == 0

    def test_round_trip(self, tmp_path):
        store = RegistryStore(tmp_path / "registry.csv")
        registry = store.load()
        store.save(registry)

        assert store.load() == registry
        assert loads_registry(dumps_registry(registry)) == registry

    def test_append(self, tmp_path):
        store = RegistryStore(tmp_path / "registry.csv")
        registry = store.load()
        store.append_class(registry, "novel-1", ClassOrigin.SPAWNED)

        assert registry.names == (*PREDEFINED_CLASSES, "novel-1")
        assert store.load().names == registry.names
        assert store.load().spawned_count == 1

    def test_duplicate(self, tmp_path):
        registry = RegistryStore(tmp_path / "registry.csv").load()
        with pytest.raises(DuplicateClass):
            append_class(registry, "good", ClassOrigin.SPAWNED, tmp_path / "registry.csv")

    def test_stale_copy_cannot_reuse_a_taken_name(self, tmp_path):
        store = RegistryStore(tmp_path / "registry.csv")
        first, second = store.load(), store.load()

        store.append_class(first, first.next_spawn_name(), ClassOrigin.SPAWNED)
        with pytest.raises(DuplicateClass):
            store.append_class(second, second.next_spawn_name(), ClassOrigin.SPAWNED)

        assert store.load().names == (*PREDEFINED_CLASSES, "novel-1")
        assert "novel-1" not in second

    def test_append_syncs_in_memory_copy(self, tmp_path):
        store = RegistryStore(tmp_path / "registry.csv")
        other = store.load()
        store.append_class(store.load(), "novel-1", ClassOrigin.SPAWNED)

        store.append_class(other, "imported", ClassOrigin.SPAWNED)
        assert other.names == (*PREDEFINED_CLASSES, "novel-1", "imported")
        assert store.load().names == other.names

    def test_interrupted_write_keeps_previous_registry(self, tmp_path, monkeypatch):
        store = RegistryStore(tmp_path / "registry.csv")
        registry = store.load()
        store.save(registry)
        before = store.path.read_bytes()

        def crash(src, dst):
            raise OSError("disk full")

        monkeypatch.setattr(files.os, "replace", crash)
        with pytest.raises(StoreIoError):
            store.append_class(registry, "novel-1", ClassOrigin.SPAWNED)

        assert store.path.read_bytes() == before
        assert "novel-1" not in registry
        assert sorted(p.name for p in tmp_path.iterdir()) == ["registry.csv", "registry.csv.lock"]

    def test_malformed_line(self):
        with pytest.raises(StoreIoError):
            loads_registry("good,predefined\n")
        with pytest.raises(StoreIoError):
            loads_registry("good,imported,1970-01-01T00:00:00+00:00\n")
