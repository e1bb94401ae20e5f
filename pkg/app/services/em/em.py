"""Semi-supervised EM over labeled and unlabeled documents"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from app.constants import MONOTONE_SLACK
from app.exceptions import (
    ClassSetMismatch,
    DimensionMismatch,
    NoLabeledData,
    NonMonotoneObjective,
)
from app.schemas.corpus import Document, Vocabulary
from app.schemas.em import EmConfig, EmTrace, Responsibilities, TraceEntry
from app.schemas.model import GenerativeModel
from app.services.corpus.vocabulary import vectorize
from app.services.model.naive_bayes import (
    attribute_statistics,
    estimate,
    joint_matrix,
    label_matrix,
    train_supervised,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Corpus:
    """Count matrices of one EM problem, built once per fit"""
    labeled: Sequence[Document]
    unlabeled: Sequence[Document]
    labeled_counts: np.ndarray
    labeled_onehot: np.ndarray
    unlabeled_counts: np.ndarray

    @classmethod
    def build(
        cls,
        labeled: Sequence[Document],
        unlabeled: Sequence[Document],
        vocab: Vocabulary,
        classes: Sequence[str],
    ) -> "_Corpus":
        return cls(
            labeled=labeled,
            unlabeled=unlabeled,
            labeled_counts=vectorize(labeled, vocab),
            labeled_onehot=label_matrix(labeled, classes),
            unlabeled_counts=vectorize(unlabeled, vocab),
        )


def _responsibilities(model: GenerativeModel, counts: np.ndarray) -> np.ndarray:
    joints = joint_matrix(model, counts)
    if joints.shape[0] == 0:
        return np.zeros((0, len(model.classes)))
    return np.exp(joints - logsumexp(joints, axis=1, keepdims=True))


def _penalty(model: GenerativeModel) -> float:
    """Dirichlet log-prior matching the additive smoothing (constants dropped)"""
    alpha = model.smoothing_alpha
    return alpha * (
        math.fsum(model.log_priors) + math.fsum(model.log_conditionals.ravel()))


def _objective(model: GenerativeModel, corpus: _Corpus, weight: float) -> float:
    labeled_terms = (joint_matrix(model, corpus.labeled_counts) * corpus.labeled_onehot).sum(axis=1)
    total = math.fsum(labeled_terms) + _penalty(model)

    if weight > 0 and corpus.unlabeled_counts.shape[0] > 0:
        joints = joint_matrix(model, corpus.unlabeled_counts)
        total += weight * math.fsum(logsumexp(joints, axis=1))
    return total


def _q_value(
    candidate: GenerativeModel,
    resp: np.ndarray,
    corpus: _Corpus,
    weight: float,
) -> float:
    labeled_terms = (
        joint_matrix(candidate, corpus.labeled_counts) * corpus.labeled_onehot).sum(axis=1)
    total = math.fsum(labeled_terms) + _penalty(candidate)

    if weight > 0 and corpus.unlabeled_counts.shape[0] > 0:
        expected = (joint_matrix(candidate, corpus.unlabeled_counts) * resp).sum(axis=1)
        total += weight * math.fsum(expected)
    return total


def _maximize(
    corpus: _Corpus,
    resp: np.ndarray,
    vocab: Vocabulary,
    classes: Sequence[str],
    config: EmConfig,
) -> GenerativeModel:
    weight = config.unlabeled_weight
    if weight == 0 or corpus.unlabeled_counts.shape[0] == 0:
        return train_supervised(corpus.labeled, vocab, config.alpha, classes=classes)

    counts = np.vstack([corpus.labeled_counts, corpus.unlabeled_counts])
    weights = np.vstack([corpus.labeled_onehot, weight * resp])
    doc_weights = [1.0] * len(corpus.labeled) + [weight] * len(corpus.unlabeled)
    return estimate(
        counts,
        weights,
        classes,
        vocab,
        config.alpha,
        attribute_statistics([*corpus.labeled, *corpus.unlabeled], doc_weights),
    )


def _check_same_space(a: GenerativeModel, b: GenerativeModel) -> None:
    if a.classes != b.classes:
        raise ClassSetMismatch(f"classes differ: {a.classes} vs {b.classes}")
    if a.vocab.words != b.vocab.words:
        raise ClassSetMismatch("models are defined over different vocabularies")


def e_step(model: GenerativeModel, unlabeled: Sequence[Document]) -> Responsibilities:
    """Classify every unlabeled document softly under the current model"""
    matrix = _responsibilities(model, vectorize(unlabeled, model.vocab))
    matrix.setflags(write=False)
    return Responsibilities(
        doc_ids=tuple(doc.id for doc in unlabeled),
        classes=model.classes,
        matrix=matrix,
    )


def m_step(
    labeled: Sequence[Document],
    unlabeled: Sequence[Document],
    resp: Responsibilities,
    vocab: Vocabulary,
    config: EmConfig,
) -> GenerativeModel:
    """
    Re-estimate from labeled documents (weight 1 on their gold class) plus
    unlabeled documents weighted by lambda * responsibility.
    """
    if resp.doc_ids != tuple(doc.id for doc in unlabeled):
        raise DimensionMismatch(
            f"{len(resp.doc_ids)} responsibility rows for {len(unlabeled)} unlabeled documents")
    if resp.matrix.shape != (len(unlabeled), len(resp.classes)):
        raise DimensionMismatch(f"responsibility matrix has shape {resp.matrix.shape}")

    classes = list(resp.classes) if resp.classes else sorted({d.label for d in labeled})
    corpus = _Corpus.build(labeled, unlabeled, vocab, classes)
    return _maximize(corpus, resp.matrix, vocab, classes, config)


def weighted_objective(
    model: GenerativeModel,
    labeled: Sequence[Document],
    unlabeled: Sequence[Document],
    unlabeled_weight: float,
) -> float:
    """Labeled log-likelihood + lambda * unlabeled marginal + smoothing log-prior"""
    corpus = _Corpus.build(labeled, unlabeled, model.vocab, model.classes)
    return _objective(model, corpus, unlabeled_weight)


def q_function(
    candidate: GenerativeModel,
    current: GenerativeModel,
    labeled: Sequence[Document],
    unlabeled: Sequence[Document],
    unlabeled_weight: float,
) -> float:
    """Expected complete-data objective of candidate under current's responsibilities"""
    _check_same_space(candidate, current)
    corpus = _Corpus.build(labeled, unlabeled, candidate.vocab, candidate.classes)
    resp = _responsibilities(current, corpus.unlabeled_counts)
    return _q_value(candidate, resp, corpus, unlabeled_weight)


def em_fit(
    labeled: Sequence[Document],
    unlabeled: Sequence[Document],
    vocab: Vocabulary,
    config: Optional[EmConfig] = None,
    classes: Optional[Sequence[str]] = None,
) -> Tuple[GenerativeModel, EmTrace]:
    """
    Start from the supervised model and alternate E and M steps until the
    relative objective change drops below tolerance or max_iterations runs out.
    The class set defaults to the labels present in the labeled documents.
    """
    config = config or EmConfig()
    if not labeled:
        raise NoLabeledData("EM needs labeled documents to build the initial model")

    # Fixed summation order keeps traces reproducible
    labeled = sorted(labeled, key=lambda d: d.id)
    unlabeled = sorted((d.without_label() for d in unlabeled), key=lambda d: d.id)
    weight = config.unlabeled_weight

    model = train_supervised(labeled, vocab, config.alpha, classes=classes)
    classes = model.classes
    corpus = _Corpus.build(labeled, unlabeled, vocab, classes)

    objective = _objective(model, corpus, weight)
    trace = EmTrace(per_iteration=[TraceEntry(iteration=0, objective=objective, max_resp_change=0.0)])
    resp = _responsibilities(model, corpus.unlabeled_counts)

    logger.info(
        "EM start: %d labeled, %d unlabeled, %d classes, lambda=%g, objective=%.6f",
        len(labeled), len(unlabeled), len(classes), weight, objective)

    for iteration in range(1, config.max_iterations + 1):
        new_model = _maximize(corpus, resp, vocab, classes, config)

        if config.check_q_improvement:
            q_new = _q_value(new_model, resp, corpus, weight)
            q_old = _q_value(model, resp, corpus, weight)
            if q_new < q_old - MONOTONE_SLACK:
                raise NonMonotoneObjective(
                    f"iteration {iteration}: Q decreased from {q_old!r} to {q_new!r}")

        new_objective = _objective(new_model, corpus, weight)
        if new_objective < objective - MONOTONE_SLACK:
            raise NonMonotoneObjective(
                f"iteration {iteration}: objective decreased from {objective!r} to {new_objective!r}")

        new_resp = _responsibilities(new_model, corpus.unlabeled_counts)
        change = float(np.abs(new_resp - resp).max()) if new_resp.size else 0.0
        trace.per_iteration.append(TraceEntry(
            iteration=iteration, objective=new_objective, max_resp_change=change))

        logger.debug(
            "EM iteration %d: objective=%.6f delta=%.3g max_resp_change=%.3g",
            iteration, new_objective, new_objective - objective, change)

        converged = abs(new_objective - objective) <= config.tolerance * abs(new_objective)
        model, objective, resp = new_model, new_objective, new_resp
        if converged:
            logger.info("EM converged after %d iterations, objective=%.6f", iteration, objective)
            break
    else:
        logger.info(
            "EM stopped at max_iterations=%d, objective=%.6f", config.max_iterations, objective)

    return model, trace
