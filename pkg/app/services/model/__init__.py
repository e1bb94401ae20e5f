"""Generative naive Bayes classifier"""

from .naive_bayes import (
    attribute_statistics,
    classify,
    estimate,
    from_statistics,
    joint_matrix,
    label_matrix,
    log_joint,
    marginal_log_likelihood,
    mean_std,
    posterior,
    predict_proba,
    train_supervised,
)

__all__ = [
    'train_supervised', 'log_joint', 'marginal_log_likelihood', 'posterior',
    'classify', 'predict_proba', 'joint_matrix', 'estimate', 'from_statistics',
    'label_matrix', 'attribute_statistics', 'mean_std',
]
