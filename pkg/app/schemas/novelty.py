from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator


class AttributeRange(BaseModel):
    """z-score interval mean +/- k*std of one numeric attribute"""
    model_config = ConfigDict(frozen=True)

    attribute: str
    mean: float
    std: float
    k: float
    low: float
    high: float

    @model_validator(mode="after")
    def _ordered(self) -> "AttributeRange":
        if self.low > self.high:
            raise ValueError(f"low {self.low} > high {self.high}")
        return self

    def contains(self, value: float) -> bool:
        return self.low <= value <= self.high


class NoveltyDecision(BaseModel):
    """Whether a document fits a known class, with both signals behind it"""
    model_config = ConfigDict(frozen=True)

    verdict: Literal["known", "novel"]
    # Set only for known verdicts
    class_name: Optional[str] = None
    max_posterior: float
    out_of_range_attributes: Tuple[str, ...] = ()
    threshold: float

    @model_validator(mode="after")
    def _verdict_is_consistent(self) -> "NoveltyDecision":
        fits = self.max_posterior >= self.threshold and not self.out_of_range_attributes
        if fits != (self.verdict == "known"):
            raise ValueError("verdict disagrees with posterior/threshold/range signals")
        if (self.verdict == "known") != (self.class_name is not None):
            raise ValueError("class_name is required exactly for known verdicts")
        return self

    @property
    def is_novel(self) -> bool:
        return self.verdict == "novel"
