from typing import Dict, List

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field


class ClassCounts(BaseModel):
    """One-vs-rest tallies of a single class"""
    model_config = ConfigDict(frozen=True)

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0


class ConfusionCounts(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_class: Dict[str, ClassCounts]
    total: int

    @property
    def correct(self) -> int:
        return sum(counts.tp for counts in self.per_class.values())


class ClassScores(BaseModel):
    model_config = ConfigDict(frozen=True)

    precision: float
    recall: float
    f1: float


class MetricsReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    accuracy: float
    per_class: Dict[str, ClassScores]
    macro_precision: float
    macro_recall: float
    macro_f1: float

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"class": name, "precision": s.precision, "recall": s.recall, "f1": s.f1}
            for name, s in self.per_class.items()
        ]
        rows.append({
            "class": "macro",
            "precision": self.macro_precision,
            "recall": self.macro_recall,
            "f1": self.macro_f1,
        })
        rows.append({
            "class": "accuracy",
            "precision": self.accuracy,
            "recall": self.accuracy,
            "f1": self.accuracy,
        })
        return pd.DataFrame(rows, columns=["class", "precision", "recall", "f1"])


class ComparisonRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    accuracy_supervised: float
    accuracy_semisupervised: float
    f1_supervised: float
    f1_semisupervised: float


class ComparisonTable(BaseModel):
    """Supervised vs semi-supervised scores per labeled-set size"""

    rows: List[ComparisonRow] = Field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [row.model_dump() for row in self.rows],
            columns=list(ComparisonRow.model_fields),
        )
