"""Vocabulary construction, count vectors and per-class word sets"""
from __future__ import annotations

import logging
from collections import Counter
from typing import List, Sequence

import numpy as np

from app.exceptions import EmptyVocabulary, NoDocuments, UnknownClass
from app.schemas.corpus import Document, Vocabulary, WordSet, WordSetMatch
from app.schemas.model import GenerativeModel

logger = logging.getLogger(__name__)

# A word enters the vocabulary once it occurs this often across the corpus
MIN_CORPUS_FREQUENCY = 2
MIN_MATCH_SIZE = 2


def build_vocabulary(docs: Sequence[Document]) -> Vocabulary:
    """Words occurring at least twice across the whole corpus, sorted"""
    if not docs:
        raise NoDocuments("cannot build a vocabulary from zero documents")

    corpus_frequency: Counter[str] = Counter()
    doc_frequency: Counter[str] = Counter()
    for doc in docs:
        corpus_frequency.update(doc.token_counts)
        doc_frequency.update(doc.token_counts.keys())

    words = [w for w, n in corpus_frequency.items() if n >= MIN_CORPUS_FREQUENCY]
    if not words:
        raise EmptyVocabulary(
            f"no word occurs {MIN_CORPUS_FREQUENCY}+ times in {len(docs)} documents")

    logger.info(
        "Vocabulary: %d of %d distinct words admitted", len(words), len(corpus_frequency))
    return Vocabulary.from_words(
        words,
        doc_frequency={w: doc_frequency[w] for w in words},
        corpus_frequency={w: corpus_frequency[w] for w in words},
    )


def vectorize(docs: Sequence[Document], vocab: Vocabulary) -> np.ndarray:
    """Document x word count matrix; out-of-vocabulary words are dropped"""
    counts = np.zeros((len(docs), len(vocab)), dtype=np.float64)
    for i, doc in enumerate(docs):
        for word, n in doc.token_counts.items():
            j = vocab.index.get(word)
            if j is not None:
                counts[i, j] = n
    return counts


def build_word_sets(
    labeled_docs: Sequence[Document],
    vocab: Vocabulary,
    model: GenerativeModel,
) -> List[WordSet]:
    """One word set per model class: vocabulary words seen in that class"""
    observed: dict[str, set[str]] = {name: set() for name in model.classes}

    for doc in labeled_docs:
        if doc.label not in observed:
            raise UnknownClass(f"{doc.id}: unknown class {doc.label!r}")
        observed[doc.label].update(w for w in doc.token_counts if w in vocab)

    word_sets = []
    for name in model.classes:
        row = model.class_index(name)
        probabilities = {
            w: float(np.exp(model.log_conditionals[row, vocab.index[w]]))
            for w in sorted(observed[name])
        }
        word_sets.append(WordSet(
            class_name=name,
            words=frozenset(observed[name]),
            probabilities=probabilities,
        ))
    return word_sets


def match_word_sets(doc: Document, sets: Sequence[WordSet]) -> List[WordSetMatch]:
    """Class word sets sharing at least two distinct words with the document"""
    doc_words = set(doc.token_counts)
    matches = []

    for word_set in sets:
        shared = doc_words & word_set.words
        if len(shared) < MIN_MATCH_SIZE:
            continue
        matches.append(WordSetMatch(
            class_name=word_set.class_name,
            words=frozenset(shared),
            probabilities={w: word_set.probabilities[w] for w in sorted(shared)},
        ))
    return matches
