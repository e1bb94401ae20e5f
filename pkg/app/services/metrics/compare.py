"""Supervised vs semi-supervised sweep over labeled-set sizes"""
from __future__ import annotations

import logging
from typing import Optional, Sequence

from app.exceptions import EmptyEvaluation, InsufficientData
from app.schemas.corpus import Document, Vocabulary
from app.schemas.em import EmConfig
from app.schemas.metrics import ComparisonRow, ComparisonTable
from app.services.corpus.vocabulary import build_vocabulary
from app.services.em.em import em_fit
from app.services.metrics.metrics import evaluate
from app.services.model.naive_bayes import train_supervised

logger = logging.getLogger(__name__)


def compare_runs(
    labeled: Sequence[Document],
    unlabeled: Sequence[Document],
    test: Sequence[Document],
    sizes: Sequence[int],
    config: Optional[EmConfig] = None,
    vocab: Optional[Vocabulary] = None,
) -> ComparisonTable:
    """
    For every size n, train on the first n labeled documents with and without
    the unlabeled pool and score both models on the test documents.

    The vocabulary defaults to one built from the labeled pool, so the
    supervised column never depends on the unlabeled documents.
    """
    config = config or EmConfig()
    if not sizes:
        raise InsufficientData("no labeled-set sizes requested")
    if list(sizes) != sorted(sizes) or sizes[0] < 1:
        raise ValueError(f"sizes must be positive and ascending, got {list(sizes)}")
    if sizes[-1] > len(labeled):
        raise InsufficientData(
            f"size {sizes[-1]} exceeds the {len(labeled)} available labeled documents")
    if not test:
        raise EmptyEvaluation("no test documents to compare on")

    vocab = vocab or build_vocabulary(labeled)
    classes = sorted({d.label for d in labeled} | {d.label for d in test})

    table = ComparisonTable()
    for n in sizes:
        subset = labeled[:n]
        supervised = train_supervised(subset, vocab, config.alpha, classes=classes)
        semi, trace = em_fit(subset, unlabeled, vocab, config, classes=classes)

        sup_report = evaluate(supervised, test)
        semi_report = evaluate(semi, test)
        table.rows.append(ComparisonRow(
            n=n,
            accuracy_supervised=sup_report.accuracy,
            accuracy_semisupervised=semi_report.accuracy,
            f1_supervised=sup_report.macro_f1,
            f1_semisupervised=semi_report.macro_f1,
        ))
        logger.info(
            "n=%d: accuracy %.4f -> %.4f after %d EM iterations",
            n, sup_report.accuracy, semi_report.accuracy, trace.iterations)

    return table
