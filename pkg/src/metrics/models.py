"""Pydantic models for the metrics module."""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

METRIC_NAMES = ("miou", "auc", "sim", "mae")
METRIC_LABELS = {"miou": "mIoU", "auc": "AUC", "sim": "SIM", "mae": "MAE"}


def default_thresholds() -> List[float]:
    """Prediction thresholds 0.05, 0.10, …, 0.95."""
    return [round(0.05 * i, 2) for i in range(1, 20)]


class EvalConfig(BaseModel):
    """Binarization and threshold-sweep protocol."""

    model_config = ConfigDict(extra="forbid")

    bin_threshold: float = Field(default=0.5, ge=0.0, le=1.0, description="Labels ≥ this are positive")
    thresholds: List[float] = Field(default_factory=default_thresholds, description="mIoU prediction sweep")
    split: str = Field(default="test", description="Manifest split evaluated")

    @field_validator("thresholds")
    @classmethod
    def validate_thresholds(cls, value: List[float]) -> List[float]:
        if any(not 0.0 <= t <= 1.0 for t in value):
            raise ValueError("thresholds must lie in [0, 1]")
        return value


class SampleMetrics(BaseModel):
    """Metrics of one sample; None marks a metric undefined for it."""

    model_config = ConfigDict(frozen=True)

    video_id: str
    affordance_type: str
    object_class: str
    n_points: int
    miou: Optional[float] = None
    auc: Optional[float] = None
    sim: Optional[float] = None
    mae: Optional[float] = None

    def value(self, name: str) -> Optional[float]:
        return getattr(self, name)


class MetricRow(BaseModel):
    """Aggregated metrics of one affordance type (or the overall row)."""

    model_config = ConfigDict(frozen=True)

    name: str
    samples: int
    values: Dict[str, Optional[float]] = Field(..., description="Metric → mean over defined samples")
    counts: Dict[str, int] = Field(..., description="Metric → number of samples where it was defined")

    @property
    def skipped(self) -> Dict[str, int]:
        return {m: self.samples - self.counts[m] for m in METRIC_NAMES}


class MetricsReport(BaseModel):
    """Per-type rows, the overall row, and the protocol they were computed under."""

    split_label: str
    rows: List[MetricRow]
    overall: MetricRow
    samples: List[SampleMetrics] = Field(default_factory=list)
    bin_threshold: float = 0.5
    thresholds: List[float] = Field(default_factory=default_thresholds)
    config_hash: str = ""
    oracle: bool = False

    def row(self, name: str) -> MetricRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)
