"""Pydantic models for the trainer module."""

import math
from pathlib import Path
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.model.models import ModelParams


class TrainConfig(BaseModel):
    """The `train` block of the run configuration."""

    model_config = ConfigDict(extra="forbid")

    learning_rate: float = Field(default=2e-4, ge=0.0, description="Peak learning rate")
    weight_decay: float = Field(default=0.0, ge=0.0, description="Decoupled weight decay")
    warmup_ratio: float = Field(default=0.03, ge=0.0, lt=1.0, description="Fraction of steps in linear warmup")
    epochs: int = Field(default=10, ge=1, description="Passes over the training split")
    max_steps: Optional[int] = Field(default=None, ge=1, description="Fixed step budget; overrides epochs")
    batch_size: int = Field(default=1, ge=1, description="Samples per optimizer step")
    seed: int = Field(default=0, description="Shuffling seed")
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    eps: float = Field(default=1e-8, gt=0.0)

    @field_validator("learning_rate")
    @classmethod
    def validate_learning_rate(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("learning_rate must be finite")
        return value

    def total_steps(self, n_samples: int) -> int:
        """Optimizer steps for a split of n_samples."""
        if self.max_steps is not None:
            return self.max_steps
        return self.epochs * math.ceil(n_samples / self.batch_size)


class OptimizerState:
    """AdamW first/second moments per parameter and the step counter."""

    def __init__(self):
        self.step = 0
        self.first: Dict[str, np.ndarray] = {}
        self.second: Dict[str, np.ndarray] = {}

    def moments(self, name: str, shape: tuple) -> tuple[np.ndarray, np.ndarray]:
        if name not in self.first:
            self.first[name] = np.zeros(shape)
            self.second[name] = np.zeros(shape)
        return self.first[name], self.second[name]


class StepLog(BaseModel):
    """One line of the loss log."""

    model_config = ConfigDict(frozen=True)

    step: int = Field(..., ge=1)
    lr: float
    ce: float
    bce: float
    spatial: float
    iou: float
    total: float

    def as_line(self) -> str:
        values = [self.lr, self.ce, self.bce, self.spatial, self.iou, self.total]
        return "\t".join([str(self.step)] + [repr(float(v)) for v in values])


class TrainResult(BaseModel):
    """Trained parameters plus the per-step log and written artifacts."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: ModelParams
    log: list[StepLog] = Field(default_factory=list)
    checkpoint_path: Optional[Path] = None
    log_path: Optional[Path] = None


class GradientCheckReport(BaseModel):
    """Max relative finite-difference error per parameter tensor."""

    tolerance: float = Field(..., gt=0.0)
    errors: Dict[str, float] = Field(default_factory=dict)
    coordinates_checked: Dict[str, int] = Field(default_factory=dict)

    @property
    def failures(self) -> list[str]:
        return [name for name, error in self.errors.items() if not error <= self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def max_error(self) -> float:
        return max(self.errors.values(), default=0.0)

    def lines(self) -> list[str]:
        """Human-readable rows: name, error, verdict."""
        width = max((len(name) for name in self.errors), default=4)
        rows = []
        for name, error in self.errors.items():
            verdict = "ok" if error <= self.tolerance else "FAIL"
            rows.append(f"{name:<{width}}  {error:.3e}  {verdict}")
        return rows
