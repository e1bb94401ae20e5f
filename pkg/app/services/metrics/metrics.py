"""Confusion counts and accuracy / precision / recall / F1"""
from __future__ import annotations

import logging
from typing import Sequence, Tuple

import numpy as np

from app.exceptions import EmptyEvaluation, NoLabeledData, UnknownClass
from app.schemas.corpus import Document
from app.schemas.metrics import ClassCounts, ClassScores, ConfusionCounts, MetricsReport
from app.schemas.model import GenerativeModel
from app.services.model.naive_bayes import predict_proba

logger = logging.getLogger(__name__)


def tally(predictions: Sequence[Tuple[str, str]], classes: Sequence[str]) -> ConfusionCounts:
    """One-vs-rest TP/FP/FN/TN per class from (gold, predicted) pairs"""
    known = set(classes)
    for gold, predicted in predictions:
        if gold not in known:
            raise UnknownClass(f"unknown gold class {gold!r}")
        if predicted not in known:
            raise UnknownClass(f"unknown predicted class {predicted!r}")

    total = len(predictions)
    per_class = {}
    for name in classes:
        tp = sum(1 for g, p in predictions if g == name and p == name)
        fn = sum(1 for g, p in predictions if g == name and p != name)
        fp = sum(1 for g, p in predictions if g != name and p == name)
        per_class[name] = ClassCounts(tp=tp, fp=fp, fn=fn, tn=total - tp - fn - fp)

    return ConfusionCounts(per_class=per_class, total=total)


def accuracy(counts: ConfusionCounts) -> float:
    """Correct predictions over all predictions"""
    if counts.total == 0:
        raise EmptyEvaluation("accuracy of zero predictions is undefined")
    return counts.correct / counts.total


def precision_recall_f1(counts: ConfusionCounts, class_name: str) -> Tuple[float, float, float]:
    """
    precision = tp/(tp+fp), recall = tp/(tp+fn), f1 = 2pr/(p+r)

    A class with no gold and no predicted documents scores (1, 1, 1);
    otherwise a zero denominator gives 0, and f1 is 0 when p + r = 0.
    """
    try:
        c = counts.per_class[class_name]
    except KeyError:
        raise UnknownClass(f"unknown class {class_name!r}") from None

    if c.tp + c.fp + c.fn == 0:
        return 1.0, 1.0, 1.0

    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    if precision + recall == 0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)


def report(counts: ConfusionCounts) -> MetricsReport:
    """All metrics of a tally; macro values are unweighted class means"""
    per_class = {}
    for name in counts.per_class:
        p, r, f1 = precision_recall_f1(counts, name)
        per_class[name] = ClassScores(precision=p, recall=r, f1=f1)

    scores = list(per_class.values())
    return MetricsReport(
        accuracy=accuracy(counts),
        per_class=per_class,
        macro_precision=float(np.mean([s.precision for s in scores])),
        macro_recall=float(np.mean([s.recall for s in scores])),
        macro_f1=float(np.mean([s.f1 for s in scores])),
    )


def predict_labels(model: GenerativeModel, docs: Sequence[Document]) -> list[str]:
    """Maximum-posterior class of each document, ties to the first class"""
    if not docs:
        return []
    best = np.argmax(predict_proba(model, docs), axis=1)
    return [model.classes[k] for k in best]


def evaluate(model: GenerativeModel, test: Sequence[Document]) -> MetricsReport:
    """Classify every labeled test document and score the predictions"""
    if not test:
        raise EmptyEvaluation("no test documents to evaluate")
    if any(doc.label is None for doc in test):
        raise NoLabeledData("every test document needs a gold label")

    ordered = sorted(test, key=lambda d: d.id)
    predictions = list(zip((d.label for d in ordered), predict_labels(model, ordered)))
    result = report(tally(predictions, model.classes))

    logger.info(
        "Evaluated %d documents: accuracy=%.4f macro_f1=%.4f",
        len(ordered), result.accuracy, result.macro_f1)
    return result
