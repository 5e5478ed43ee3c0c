"""Pydantic models for the desk-scale experiments."""

import math
from typing import Dict, List

from pydantic import BaseModel, Field

from src.metrics.models import METRIC_NAMES


class Arm(BaseModel):
    """One ablation arm: which action input and which spatial-loss weight."""

    name: str
    use_action_tokens: bool
    spatial_loss: bool


ABLATION_ARMS = (
    Arm(name="full", use_action_tokens=True, spatial_loss=True),
    Arm(name="no_spatial", use_action_tokens=True, spatial_loss=False),
    Arm(name="no_action", use_action_tokens=False, spatial_loss=True),
    Arm(name="no_action_no_spatial", use_action_tokens=False, spatial_loss=False),
)


class RunMetrics(BaseModel):
    """Overall test metrics of one trained model; None where undefined."""

    label: str = Field(..., description="Arm name or frame count")
    seed: int
    values: Dict[str, float | None]

    def is_finite(self) -> bool:
        return all(v is not None and math.isfinite(v) for v in self.values.values())

    def record(self) -> str:
        fields = [f"run={self.label}", f"seed={self.seed}"]
        fields += [
            f"{m}={'nan' if self.values.get(m) is None else repr(self.values[m])}" for m in METRIC_NAMES
        ]
        return " ".join(fields)


class AblationReport(BaseModel):
    """Action-token × spatial-loss ablation over several seeds."""

    seeds: List[int]
    results: List[RunMetrics] = Field(default_factory=list)
    config_hash: str = ""

    def result(self, arm: str, seed: int) -> RunMetrics:
        for r in self.results:
            if r.label == arm and r.seed == seed:
                return r
        raise KeyError((arm, seed))

    def spatial_wins(self, with_action: bool = True) -> int:
        """Seeds where adding the spatial loss does not lower test mIoU; seeds missing either arm are skipped."""
        on, off = ("full", "no_spatial") if with_action else ("no_action", "no_action_no_spatial")
        wins = 0
        for seed in self.seeds:
            try:
                a, b = self.result(on, seed).values["miou"], self.result(off, seed).values["miou"]
            except KeyError:
                continue
            if a is not None and b is not None and a >= b:
                wins += 1
        return wins

    def lines(self) -> List[str]:
        header = (
            f"#afford3d-ablation v1 config_hash={self.config_hash} seeds={len(self.seeds)} "
            f"spatial_wins={self.spatial_wins()}"
        )
        return [header, *(r.record() for r in self.results)]


class FrameSweepReport(BaseModel):
    """Metrics per sampled-frame count."""

    results: List[RunMetrics] = Field(default_factory=list)
    config_hash: str = ""

    @property
    def valid(self) -> bool:
        return all(r.is_finite() for r in self.results)

    def lines(self) -> List[str]:
        header = f"#afford3d-frame-sweep v1 config_hash={self.config_hash} valid={str(self.valid).lower()}"
        return [header, *(r.record() for r in self.results)]
