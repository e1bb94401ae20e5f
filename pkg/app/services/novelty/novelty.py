"""Open-set checks and dynamic creation of new classes"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.exceptions import DuplicateClass, NoDocuments
from app.schemas.corpus import Document
from app.schemas.model import GenerativeModel
from app.schemas.novelty import AttributeRange, NoveltyDecision
from app.schemas.registry import ClassOrigin, ClassRegistry
from app.services.corpus.vocabulary import vectorize
from app.services.model.naive_bayes import from_statistics, mean_std, posterior
from app.services.store import RegistryStore, save_model

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.5
DEFAULT_K = 3.0


def _range(attribute: str, mean: float, std: float, k: float) -> AttributeRange:
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    return AttributeRange(
        attribute=attribute,
        mean=mean,
        std=std,
        k=k,
        low=mean - k * std,
        high=mean + k * std,
    )


def zscore_bounds(values: Iterable[float], k: float, attribute: str = "value") -> AttributeRange:
    """mean +/- k*std interval of the values (population std)"""
    mean, std = mean_std(values)
    return _range(attribute, mean, std, k)


def ranges_from_model(model: GenerativeModel, k: float = DEFAULT_K) -> List[AttributeRange]:
    return [
        _range(name, mean, std, k)
        for name, (mean, std) in sorted(model.attribute_stats.items())
    ]


def check_ranges(doc: Document, ranges: Sequence[AttributeRange]) -> List[str]:
    """Numeric attributes of the document lying strictly outside their range"""
    values = doc.numeric_attributes
    return [
        r.attribute for r in ranges
        if r.attribute in values and not r.contains(values[r.attribute])
    ]


def detect_novel(
    model: GenerativeModel,
    doc: Document,
    threshold: float = DEFAULT_THRESHOLD,
    ranges: Sequence[AttributeRange] = (),
) -> NoveltyDecision:
    """Known when the top posterior reaches threshold and every attribute is in range"""
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")

    result = posterior(model, doc)
    outside = tuple(check_ranges(doc, ranges))
    known = result.max_prob >= threshold and not outside

    return NoveltyDecision(
        verdict="known" if known else "novel",
        class_name=result.argmax_class if known else None,
        max_posterior=result.max_prob,
        out_of_range_attributes=outside,
        threshold=threshold,
    )


def _merge_attribute_stats(
    stats: Dict[str, Tuple[float, float]],
    weight: float,
    docs: Sequence[Document],
) -> Dict[str, Tuple[float, float]]:
    """Fold the documents' numeric attributes into pooled (mean, std) of total weight"""
    merged = dict(stats)
    names = sorted({name for doc in docs for name in doc.numeric_attributes})

    for name in names:
        new_values = np.array([
            doc.numeric_attributes[name] for doc in docs if name in doc.numeric_attributes])
        if name not in merged or weight <= 0:
            merged[name] = mean_std(new_values)
            continue

        mean, std = merged[name]
        total = weight + new_values.size
        new_mean = (weight * mean + new_values.sum()) / total
        variance = (
            weight * (std ** 2 + (mean - new_mean) ** 2)
            + ((new_values - new_mean) ** 2).sum()
        ) / total
        merged[name] = (float(new_mean), float(np.sqrt(variance)))
    return merged


def _enlarge(model: GenerativeModel, docs: Sequence[Document], name: str) -> GenerativeModel:
    if name in model.classes:
        raise DuplicateClass(f"model already has a class named {name!r}")

    new_counts = vectorize(docs, model.vocab).sum(axis=0, keepdims=True)
    return from_statistics(
        [*model.classes, name],
        class_weights=np.append(model.class_weights, float(len(docs))),
        word_weights=np.vstack([model.word_weights, new_counts]),
        vocab=model.vocab,
        alpha=model.smoothing_alpha,
        attribute_stats=_merge_attribute_stats(
            model.attribute_stats, float(model.class_weights.sum()), docs),
    )


def spawn_class(
    model: GenerativeModel,
    docs: Sequence[Document],
    registry: ClassRegistry,
    store: Optional[RegistryStore] = None,
    model_path: Optional[str | Path] = None,
) -> Tuple[GenerativeModel, str]:
    """
    Create class novel-<n> and re-estimate the model with docs labeled as it.

    With a store, the name is taken from the registry file re-read under its
    lock, and the registry (then the model, when model_path is given) is
    written before the lock is released; registry is synced to the file.
    Without one, only the in-memory registry changes.
    """
    if not docs:
        raise NoDocuments("spawning a class needs at least one document")

    if store is None:
        name = registry.next_spawn_name()
        enlarged = _enlarge(model, docs, name)
        registry.add(name, ClassOrigin.SPAWNED)
        if model_path is not None:
            save_model(enlarged, model_path)
    else:
        with store.locked() as current:
            name = current.next_spawn_name()
            enlarged = _enlarge(model, docs, name)
            current.add(name, ClassOrigin.SPAWNED)
            store.write_locked(current)
            if model_path is not None:
                save_model(enlarged, model_path)
        registry.classes[:] = current.classes

    logger.info("Spawned class %s from %d document(s)", name, len(docs))
    return enlarged, name
