import math
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.constants import NORMALIZATION_TOLERANCE
from app.exceptions import UnknownClass
from app.schemas.corpus import Vocabulary


class GenerativeModel(BaseModel):
    """
    Multinomial naive Bayes parameters in log space

    class_weights and word_weights are the (possibly fractional) counts the
    parameters were estimated from, kept so the model can be re-estimated
    with an additional class.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    classes: Tuple[str, ...]
    log_priors: np.ndarray
    log_conditionals: np.ndarray
    vocab: Vocabulary
    smoothing_alpha: float
    # attribute name -> (mean, population std), pooled over classes
    attribute_stats: Dict[str, Tuple[float, float]] = Field(default_factory=dict)
    class_weights: np.ndarray
    word_weights: np.ndarray

    def class_index(self, class_name: str) -> int:
        try:
            return self.classes.index(class_name)
        except ValueError:
            raise UnknownClass(f"unknown class: {class_name!r}") from None

    def log_prior(self, class_name: str) -> float:
        return float(self.log_priors[self.class_index(class_name)])

    def log_conditional(self, class_name: str, word: str) -> float:
        return float(self.log_conditionals[self.class_index(class_name), self.vocab.index[word]])

    def normalization_errors(self) -> List[str]:
        """Describe every violated normalization invariant (empty when valid)"""
        errors: List[str] = []
        n_classes, n_words = len(self.classes), len(self.vocab)

        if list(self.classes) != sorted(set(self.classes)):
            errors.append("classes must be unique and sorted")
        if self.log_priors.shape != (n_classes,):
            errors.append(f"log_priors shape {self.log_priors.shape} != ({n_classes},)")
            return errors
        if self.log_conditionals.shape != (n_classes, n_words):
            errors.append(
                f"log_conditionals shape {self.log_conditionals.shape} != ({n_classes}, {n_words})")
            return errors
        if not self.smoothing_alpha > 0:
            errors.append(f"smoothing_alpha must be positive, got {self.smoothing_alpha}")
        if (self.class_weights.shape != (n_classes,)
                or self.word_weights.shape != (n_classes, n_words)):
            errors.append("count statistics do not match classes x vocabulary")
            return errors

        # NaN compares false against any tolerance, so reject it up front
        for field in ("log_priors", "log_conditionals", "class_weights", "word_weights"):
            if not np.isfinite(getattr(self, field)).all():
                errors.append(f"{field} holds non-finite values")
        for field in ("class_weights", "word_weights"):
            if (getattr(self, field) < 0).any():
                errors.append(f"{field} holds negative counts")
        for name, (mean, std) in self.attribute_stats.items():
            if not (math.isfinite(mean) and math.isfinite(std) and std >= 0):
                errors.append(f"attribute {name!r} has invalid statistics ({mean!r}, {std!r})")
        if errors:
            return errors

        prior_total = math.fsum(np.exp(self.log_priors))
        if abs(prior_total - 1.0) > NORMALIZATION_TOLERANCE:
            errors.append(f"priors sum to {prior_total!r}")

        for name, row in zip(self.classes, self.log_conditionals):
            total = math.fsum(np.exp(row))
            if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
                errors.append(f"conditionals of {name!r} sum to {total!r}")

        return errors


class Posterior(BaseModel):
    """Class distribution of one document under a model"""
    model_config = ConfigDict(frozen=True)

    per_class: Dict[str, float]
    argmax_class: str
    max_prob: float
