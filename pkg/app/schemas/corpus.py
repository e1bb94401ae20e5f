from collections import Counter
from typing import Dict, FrozenSet, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

AttributeValue = Union[float, str]


class RawDocument(BaseModel):
    """Validated document body, before tokenization"""
    model_config = ConfigDict(frozen=True)

    # File name, or a synthetic id for generated documents
    source_name: str
    body: str


class Document(BaseModel):
    """Tokenized document with optional gold label and attributes"""
    model_config = ConfigDict(frozen=True)

    id: str
    tokens: Tuple[str, ...] = ()
    token_counts: Dict[str, int] = Field(default_factory=dict)
    label: Optional[str] = None
    # Categorical attributes hold text, numeric ones floats
    attributes: Dict[str, AttributeValue] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _counts_match_tokens(self) -> "Document":
        if dict(Counter(self.tokens)) != self.token_counts:
            raise ValueError("token_counts must summarize tokens exactly")
        return self

    @classmethod
    def from_tokens(
        cls,
        doc_id: str,
        tokens: Tuple[str, ...] | list[str],
        label: Optional[str] = None,
        attributes: Optional[Dict[str, AttributeValue]] = None,
    ) -> "Document":
        tokens = tuple(tokens)
        return cls(
            id=doc_id,
            tokens=tokens,
            token_counts=dict(Counter(tokens)),
            label=label,
            attributes=dict(attributes or {}),
        )

    @property
    def numeric_attributes(self) -> Dict[str, float]:
        return {
            name: float(value)
            for name, value in self.attributes.items()
            if not isinstance(value, str)
        }

    def without_label(self) -> "Document":
        """Same document with the gold label hidden"""
        return self.model_copy(update={"label": None})

    def with_label(self, label: str) -> "Document":
        return self.model_copy(update={"label": label})


class Vocabulary(BaseModel):
    """Ordered word <-> index map built from frequency filtering"""
    model_config = ConfigDict(frozen=True)

    words: Tuple[str, ...]
    index: Dict[str, int]
    doc_frequency: Dict[str, int] = Field(default_factory=dict)
    corpus_frequency: Dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_bijection(self) -> "Vocabulary":
        if list(self.words) != sorted(set(self.words)):
            raise ValueError("vocabulary words must be unique and sorted")
        if self.index != {word: i for i, word in enumerate(self.words)}:
            raise ValueError("index must be the inverse of words")
        return self

    @classmethod
    def from_words(
        cls,
        words: list[str] | Tuple[str, ...],
        doc_frequency: Optional[Dict[str, int]] = None,
        corpus_frequency: Optional[Dict[str, int]] = None,
    ) -> "Vocabulary":
        ordered = tuple(sorted(set(words)))
        return cls(
            words=ordered,
            index={word: i for i, word in enumerate(ordered)},
            doc_frequency=dict(doc_frequency or {}),
            corpus_frequency=dict(corpus_frequency or {}),
        )

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: object) -> bool:
        return word in self.index


class WordSet(BaseModel):
    """Vocabulary words seen in one class, with their class conditionals"""
    model_config = ConfigDict(frozen=True)

    class_name: str
    words: FrozenSet[str] = frozenset()
    probabilities: Dict[str, float] = Field(default_factory=dict)


class WordSetMatch(BaseModel):
    """Intersection of a document with one class word set"""
    model_config = ConfigDict(frozen=True)

    class_name: str
    words: FrozenSet[str]
    probabilities: Dict[str, float]


class CarRecord(BaseModel):
    """One row of the car evaluation dataset"""
    model_config = ConfigDict(frozen=True)

    buying: str
    maintenance: str
    price: float
    mileage: float
    safety: str
    label: str
    # 1-based data row in the source file, 0 for generated records
    row: int = 0
