"""Error hierarchy shared by every classifier service"""
from typing import Optional


class ClassifierError(Exception):
    """Base class for every error raised by ssemc"""


class InvalidFormat(ClassifierError):
    """Document is not a .txt file"""


class InvalidEncoding(ClassifierError):
    """Document body is not valid UTF-8"""


class EmptyDocument(ClassifierError):
    """Document body holds only whitespace"""


class OutOfDomain(ClassifierError):
    """Document does not belong to the car domain"""


class EmptyVocabulary(ClassifierError):
    """No word reaches the vocabulary admission count"""


class UnknownClass(ClassifierError):
    """Class name is not registered"""


class UnknownLabel(ClassifierError):
    """Dataset label is outside the class registry"""


class ParseError(ClassifierError):
    """Malformed dataset line"""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NoLabeledData(ClassifierError):
    """Training requires at least one labeled document"""


class DimensionMismatch(ClassifierError):
    """Responsibilities do not line up with the unlabeled documents"""


class ClassSetMismatch(ClassifierError):
    """Two models disagree on classes or vocabulary"""


class NonMonotoneObjective(ClassifierError):
    """EM objective decreased: an implementation bug, not a data condition"""


class EmptyValues(ClassifierError):
    """No values to compute statistics from"""


class NoDocuments(ClassifierError):
    """Operation needs at least one document"""


class EmptyEvaluation(ClassifierError):
    """Nothing to evaluate"""


class InsufficientData(ClassifierError):
    """Requested more documents than are available"""


class CorruptModel(ClassifierError):
    """Model file failed parsing or invariant checks"""

    def __init__(self, message: str, line: Optional[int] = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
        self.line = line


class DuplicateClass(ClassifierError):
    """Class name already present in the registry"""


class StoreIoError(ClassifierError):
    """Reading or writing a store file failed"""
