"""Evaluation metrics and the supervised vs semi-supervised comparison"""

from .metrics import accuracy, evaluate, precision_recall_f1, predict_labels, report, tally
from .compare import compare_runs

__all__ = [
    'tally', 'accuracy', 'precision_recall_f1', 'report', 'predict_labels', 'evaluate',
    'compare_runs',
]
