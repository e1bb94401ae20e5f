from typing import List, Tuple

import numpy as np
import pandas as pd
from pydantic import AliasChoices, BaseModel, ConfigDict, Field


class EmConfig(BaseModel):
    """Knobs of the semi-supervised EM loop"""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    max_iterations: int = Field(default=100, ge=1)
    # Relative objective change below which the loop stops
    tolerance: float = Field(default=1e-6, gt=0)
    # Weight of the unlabeled documents; 0 means purely supervised
    unlabeled_weight: float = Field(
        default=1.0, ge=0, le=1, validation_alias=AliasChoices("lambda", "unlabeled_weight"))
    alpha: float = Field(default=1.0, gt=0)
    seed: int = 0
    # Assert Q(new|current) >= Q(current|current) on every iteration
    check_q_improvement: bool = False


class Responsibilities(BaseModel):
    """Posterior class weights of each unlabeled document (rows sum to 1)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    doc_ids: Tuple[str, ...]
    classes: Tuple[str, ...]
    matrix: np.ndarray

    def __len__(self) -> int:
        return len(self.doc_ids)

    def row(self, doc_id: str) -> dict[str, float]:
        i = self.doc_ids.index(doc_id)
        return dict(zip(self.classes, (float(p) for p in self.matrix[i])))


class TraceEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    iteration: int
    objective: float
    max_resp_change: float


class EmTrace(BaseModel):
    """Weighted objective recorded after every EM iteration"""

    per_iteration: List[TraceEntry] = Field(default_factory=list)

    @property
    def objectives(self) -> List[float]:
        return [entry.objective for entry in self.per_iteration]

    @property
    def iterations(self) -> int:
        """Number of EM iterations run (entry 0 is the initial model)"""
        return max(len(self.per_iteration) - 1, 0)

    def is_monotone(self, slack: float) -> bool:
        values = self.objectives
        return all(b >= a - slack for a, b in zip(values, values[1:]))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [entry.model_dump() for entry in self.per_iteration],
            columns=["iteration", "objective", "max_resp_change"],
        )
