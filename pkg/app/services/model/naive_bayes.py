"""Multinomial naive Bayes: estimation, likelihoods and posteriors in log space"""
from __future__ import annotations

import logging
import math
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from app.exceptions import EmptyValues, EmptyVocabulary, NoLabeledData, UnknownClass
from app.schemas.corpus import Document, Vocabulary
from app.schemas.model import GenerativeModel, Posterior
from app.services.corpus.vocabulary import vectorize

logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.float64)
    array.setflags(write=False)
    return array


def mean_std(
    values: Iterable[float],
    weights: Optional[Iterable[float]] = None,
) -> Tuple[float, float]:
    """Population mean and standard deviation, optionally weighted"""
    data = np.asarray(list(values), dtype=np.float64)
    if data.size == 0:
        raise EmptyValues("cannot compute statistics of zero values")
    if weights is None:
        return float(data.mean()), float(data.std(ddof=0))

    w = np.asarray(list(weights), dtype=np.float64)
    if w.sum() <= 0:
        raise EmptyValues("cannot compute statistics with zero total weight")
    mean = np.average(data, weights=w)
    variance = np.average((data - mean) ** 2, weights=w)
    return float(mean), float(np.sqrt(variance))


def attribute_statistics(
    docs: Sequence[Document],
    weights: Optional[Sequence[float]] = None,
) -> Dict[str, Tuple[float, float]]:
    """
    (mean, std) of every numeric attribute pooled over all documents;
    documents with zero weight do not contribute.
    """
    if weights is None:
        weights = [1.0] * len(docs)

    values: Dict[str, list[float]] = {}
    value_weights: Dict[str, list[float]] = {}
    # Sum in id order so the result does not depend on input order
    for doc, weight in sorted(zip(docs, weights), key=lambda pair: pair[0].id):
        if weight <= 0:
            continue
        for name, value in doc.numeric_attributes.items():
            values.setdefault(name, []).append(value)
            value_weights.setdefault(name, []).append(weight)

    stats = {}
    for name in sorted(values):
        if all(w == 1.0 for w in value_weights[name]):
            stats[name] = mean_std(values[name])
        else:
            stats[name] = mean_std(values[name], value_weights[name])
    return stats


def from_statistics(
    classes: Sequence[str],
    class_weights: np.ndarray,
    word_weights: np.ndarray,
    vocab: Vocabulary,
    alpha: float,
    attribute_stats: Optional[Dict[str, Tuple[float, float]]] = None,
) -> GenerativeModel:
    """
    Smoothed estimates from (possibly fractional) counts

    prior(c) = (N_c + a) / (N + a|C|)
    cond(w|c) = (n(w,c) + a) / (n(.,c) + a|V|)
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if len(vocab) == 0:
        raise EmptyVocabulary("cannot estimate over an empty vocabulary")

    class_weights = np.asarray(class_weights, dtype=np.float64)
    word_weights = np.asarray(word_weights, dtype=np.float64)

    # Keep classes in lexicographic order so lookups and tie-breaks are stable
    order = sorted(range(len(classes)), key=lambda i: classes[i])
    class_weights = class_weights[order]
    word_weights = word_weights[order]
    n_classes, n_words = len(order), len(vocab)

    priors = (class_weights + alpha) / (class_weights.sum() + alpha * n_classes)
    conditionals = (word_weights + alpha) / (
        word_weights.sum(axis=1, keepdims=True) + alpha * n_words)

    return GenerativeModel(
        classes=tuple(classes[i] for i in order),
        log_priors=_frozen(np.log(priors)),
        log_conditionals=_frozen(np.log(conditionals)),
        vocab=vocab,
        smoothing_alpha=float(alpha),
        attribute_stats=dict(attribute_stats or {}),
        class_weights=_frozen(class_weights),
        word_weights=_frozen(word_weights),
    )


def estimate(
    counts: np.ndarray,
    weights: np.ndarray,
    classes: Sequence[str],
    vocab: Vocabulary,
    alpha: float,
    attribute_stats: Optional[Dict[str, Tuple[float, float]]] = None,
) -> GenerativeModel:
    """Estimate from a doc x word count matrix and a doc x class weight matrix"""
    return from_statistics(
        classes,
        class_weights=weights.sum(axis=0),
        word_weights=weights.T @ counts,
        vocab=vocab,
        alpha=alpha,
        attribute_stats=attribute_stats,
    )


def label_matrix(docs: Sequence[Document], classes: Sequence[str]) -> np.ndarray:
    """One-hot doc x class matrix of gold labels"""
    position = {name: k for k, name in enumerate(classes)}
    onehot = np.zeros((len(docs), len(classes)), dtype=np.float64)
    for i, doc in enumerate(docs):
        if doc.label is None:
            raise NoLabeledData(f"{doc.id}: document has no label")
        k = position.get(doc.label)
        if k is None:
            raise UnknownClass(f"{doc.id}: unknown class {doc.label!r}")
        onehot[i, k] = 1.0
    return onehot


def train_supervised(
    labeled: Sequence[Document],
    vocab: Vocabulary,
    alpha: float = 1.0,
    classes: Optional[Sequence[str]] = None,
) -> GenerativeModel:
    """Initial model from labeled documents only"""
    if not labeled:
        raise NoLabeledData("supervised training needs at least one labeled document")
    if len(vocab) == 0:
        raise EmptyVocabulary("cannot train over an empty vocabulary")

    if classes is None:
        if any(doc.label is None for doc in labeled):
            raise NoLabeledData("every training document must carry a label")
        classes = sorted({doc.label for doc in labeled})
    classes = sorted(classes)

    model = estimate(
        vectorize(labeled, vocab),
        label_matrix(labeled, classes),
        classes,
        vocab,
        alpha,
        attribute_statistics(labeled),
    )
    logger.debug(
        "Supervised model: %d docs, %d classes, %d words",
        len(labeled), len(model.classes), len(vocab))
    return model


def joint_matrix(model: GenerativeModel, counts: np.ndarray) -> np.ndarray:
    """log p(doc, c) for every document row and class column"""
    return counts @ model.log_conditionals.T + model.log_priors


def log_joint(model: GenerativeModel, doc: Document, class_name: str) -> float:
    """log prior(c) + sum of count(w) * log cond(w|c) over in-vocabulary words"""
    k = model.class_index(class_name)
    counts = vectorize([doc], model.vocab)
    return float(joint_matrix(model, counts)[0, k])


def marginal_log_likelihood(model: GenerativeModel, docs: Sequence[Document]) -> float:
    """
    Sum of per-document log likelihoods: labeled documents contribute the
    joint with their label, unlabeled ones the log-sum-exp over classes.
    """
    if not docs:
        return 0.0

    joints = joint_matrix(model, vectorize(docs, model.vocab))
    terms = []
    for doc, row in zip(docs, joints):
        if doc.label is not None:
            terms.append(float(row[model.class_index(doc.label)]))
        else:
            terms.append(float(logsumexp(row)))
    return math.fsum(terms)


def predict_proba(model: GenerativeModel, docs: Sequence[Document]) -> np.ndarray:
    """Posterior class probabilities, one row per document"""
    joints = joint_matrix(model, vectorize(docs, model.vocab))
    if joints.shape[0] == 0:
        return joints
    return np.exp(joints - logsumexp(joints, axis=1, keepdims=True))


def _posterior_from_row(model: GenerativeModel, row: np.ndarray) -> Posterior:
    # argmax returns the first maximum, i.e. the lexicographically smallest class
    best = int(np.argmax(row))
    return Posterior(
        per_class={name: float(p) for name, p in zip(model.classes, row)},
        argmax_class=model.classes[best],
        max_prob=float(row[best]),
    )


def posterior(model: GenerativeModel, doc: Document) -> Posterior:
    """Normalized class distribution of one document"""
    return _posterior_from_row(model, predict_proba(model, [doc])[0])


def classify(model: GenerativeModel, doc: Document) -> Tuple[str, Posterior]:
    """Class with maximum posterior probability"""
    result = posterior(model, doc)
    return result.argmax_class, result
