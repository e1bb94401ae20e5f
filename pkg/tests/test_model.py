import math

import numpy as np
import pytest

from app.exceptions import EmptyValues, EmptyVocabulary, NoLabeledData, UnknownClass
from app.schemas.corpus import Vocabulary
from app.services.model import (
    attribute_statistics,
    classify,
    log_joint,
    marginal_log_likelihood,
    mean_std,
    posterior,
    predict_proba,
    train_supervised,
)
from tests.factories import make_doc


class TestTrainSupervised:
    def test_smoothed_estimates(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab, alpha=1.0)

        assert model.classes == ("family", "sport")
        assert np.exp(model.log_priors) == pytest.approx([0.5, 0.5])
        # vocabulary order: comfort, engine, fast, seat, wheel
        assert np.exp(model.log_conditionals[0]) == pytest.approx(
            [4 / 11, 1 / 11, 1 / 11, 3 / 11, 2 / 11])
        assert np.exp(model.log_conditionals[1]) == pytest.approx(
            [1 / 11, 3 / 11, 4 / 11, 1 / 11, 2 / 11])
        assert model.normalization_errors() == []

    def test_prior_smoothing_with_unseen_class(self, toy_labeled, toy_vocab):
        model = train_supervised(
            toy_labeled, toy_vocab, alpha=1.0, classes=["sport", "family", "truck"])

        assert model.classes == ("family", "sport", "truck")
        assert model.log_prior("truck") == pytest.approx(math.log(1 / 7))
        assert model.log_conditional("truck", "seat") == pytest.approx(math.log(1 / 5))

    def test_keeps_sufficient_statistics(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        assert model.class_weights.tolist() == [2.0, 2.0]
        assert model.word_weights.tolist() == [[3, 0, 0, 2, 1], [0, 2, 3, 0, 1]]

    def test_pooled_attribute_statistics(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        mean, std = model.attribute_stats["price"]
        assert mean == pytest.approx(26.0)
        assert std == pytest.approx(math.sqrt(40.0))

    def test_parameters_are_read_only(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        with pytest.raises(ValueError):
            model.log_priors[0] = 0.0

    def test_needs_labeled_documents(self, toy_vocab):
        with pytest.raises(NoLabeledData):
            train_supervised([], toy_vocab)
        with pytest.raises(NoLabeledData):
            train_supervised([make_doc("u", ["seat"])], toy_vocab)

    def test_rejects_labels_outside_classes(self, toy_labeled, toy_vocab):
        with pytest.raises(UnknownClass):
            train_supervised(toy_labeled, toy_vocab, classes=["sport"])

    def test_needs_vocabulary(self, toy_labeled):
        with pytest.raises(EmptyVocabulary):
            train_supervised(toy_labeled, Vocabulary.from_words([]))


class TestPosterior:
    def test_matches_hand_computation(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        result = posterior(model, make_doc("q", ["fast", "engine"]))

        assert result.per_class["sport"] == pytest.approx(12 / 13)
        assert result.per_class["family"] == pytest.approx(1 / 13)
        assert result.argmax_class == "sport"
        assert result.max_prob == pytest.approx(12 / 13)

    def test_evidence_free_document_returns_priors(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab, classes=["family", "sport", "truck"])
        result = posterior(model, make_doc("q", ["unknown", "words"]))
        assert result.per_class == pytest.approx(
            {name: math.exp(model.log_prior(name)) for name in model.classes})

    def test_ties_break_lexicographically(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        label, result = classify(model, make_doc("q", ["wheel"]))
        assert result.per_class["family"] == result.per_class["sport"]
        assert label == "family"

    def test_long_documents_do_not_underflow(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        result = posterior(model, make_doc("q", ["fast"] * 5000 + ["seat"] * 4000))
        assert math.isfinite(result.max_prob)
        assert sum(result.per_class.values()) == pytest.approx(1.0)

    def test_batched_rows_sum_to_one(self, toy_labeled, toy_unlabeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        proba = predict_proba(model, toy_unlabeled)
        assert proba.shape == (3, 2)
        assert proba.sum(axis=1) == pytest.approx([1.0, 1.0, 1.0])


class TestLikelihood:
    def test_log_joint(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        doc = make_doc("q", ["fast", "fast", "seat", "ignored"])
        expected = math.log(0.5) + 2 * math.log(4 / 11) + math.log(1 / 11)
        assert log_joint(model, doc, "sport") == pytest.approx(expected)

    def test_log_joint_of_unknown_class(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        with pytest.raises(UnknownClass):
            log_joint(model, make_doc("q", ["seat"]), "truck")

    def test_marginal_mixes_labeled_and_unlabeled(self, toy_labeled, toy_vocab):
        model = train_supervised(toy_labeled, toy_vocab)
        labeled = make_doc("l", ["seat"], "family")
        unlabeled = make_doc("u", ["seat"])

        joint = log_joint(model, labeled, "family")
        marginal = math.log(sum(math.exp(log_joint(model, unlabeled, c)) for c in model.classes))

        assert marginal_log_likelihood(model, [labeled]) == pytest.approx(joint)
        assert marginal_log_likelihood(model, [unlabeled]) == pytest.approx(marginal)
        assert marginal_log_likelihood(model, []) == 0.0


class TestAttributeStatistics:
    def test_population_statistics(self):
        assert mean_std([0.0, 10.0]) == (5.0, 5.0)
        assert mean_std([10.0, 10.0, 10.0]) == (10.0, 0.0)

    def test_weighted_statistics(self):
        mean, std = mean_std([0.0, 10.0], weights=[3.0, 1.0])
        assert mean == pytest.approx(2.5)
        assert std == pytest.approx(math.sqrt(18.75))

    def test_empty_values(self):
        with pytest.raises(EmptyValues):
            mean_std([])

    def test_independent_of_document_order(self):
        docs = [make_doc(f"d{i}", [], price=v) for i, v in enumerate([0.1, 0.7, 1.3, 2.9])]
        forward = attribute_statistics(docs)
        backward = attribute_statistics(list(reversed(docs)))
        assert forward == backward

    def test_zero_weight_documents_are_skipped(self):
        docs = [make_doc("a", [], price=1.0), make_doc("b", [], price=100.0)]
        assert attribute_statistics(docs, [1.0, 0.0]) == {"price": (1.0, 0.0)}
