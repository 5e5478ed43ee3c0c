"""Pydantic models for the losses module."""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class LossConfig(BaseModel):
    """The `loss` block of the run configuration."""

    model_config = ConfigDict(extra="forbid")

    radius: float = Field(default=0.1, gt=0.0, description="Neighborhood radius R_p (unit-sphere frame)")
    sigma_ratio: float = Field(default=0.1, gt=0.0, description="σ = sigma_ratio · R_p")
    epsilon: float = Field(default=1e-6, gt=0.0, description="Dice / IoU denominator guard")
    bce_clamp: float = Field(default=1e-7, gt=0.0, lt=0.5, description="BCE probability clamp")
    lambda_ce: float = Field(default=1.0, ge=0.0, description="Weight of the text CE term")
    lambda_bce: float = Field(default=1.0, ge=0.0, description="Weight of BCE")
    lambda_spatial: float = Field(default=1.0, ge=0.0, description="Weight of spatial Dice")
    lambda_iou: float = Field(default=1.0, ge=0.0, description="Weight of soft IoU")

    @property
    def sigma(self) -> float:
        return self.sigma_ratio * self.radius

    def weights(self) -> "LossWeights":
        return LossWeights(
            lambda_ce=self.lambda_ce,
            lambda_bce=self.lambda_bce,
            lambda_spatial=self.lambda_spatial,
            lambda_iou=self.lambda_iou,
        )


class LossWeights(BaseModel):
    """Composite-loss balancing weights."""

    model_config = ConfigDict(frozen=True)

    lambda_ce: float = Field(default=1.0, ge=0.0, allow_inf_nan=False)
    lambda_bce: float = Field(default=1.0, ge=0.0, allow_inf_nan=False)
    lambda_spatial: float = Field(default=1.0, ge=0.0, allow_inf_nan=False)
    lambda_iou: float = Field(default=1.0, ge=0.0, allow_inf_nan=False)


class SpatialWeights(BaseModel):
    """Per-point adaptive weights ω in (0, 1] with the parameters that produced them."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    omega: np.ndarray = Field(..., description="Length-N weights")
    radius: float = Field(..., gt=0.0)
    sigma: float = Field(..., gt=0.0)
    empty_neighborhoods: int = Field(default=0, ge=0, description="Points with no neighbor")

    @model_validator(mode="after")
    def validate_range(self):
        """ω must stay in (0, 1]."""
        if np.any(self.omega <= 0.0) or np.any(self.omega > 1.0):
            raise ValueError("spatial weights must lie in (0, 1]")
        return self

    def __len__(self) -> int:
        return int(self.omega.shape[0])


class LossTerm(BaseModel):
    """A loss value with its gradient w.r.t. the predictions."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    value: float
    grad: np.ndarray


class LossBreakdown(BaseModel):
    """Per-term values, their weighted total and d(total)/dŷ."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    ce: float = Field(default=0.0, ge=0.0)
    bce: float = Field(..., ge=0.0)
    spatial: float = Field(..., ge=0.0, le=1.0)
    iou: float = Field(..., ge=0.0, le=1.0)
    total: float = Field(..., ge=0.0)
    grad: Optional[np.ndarray] = Field(None, description="d(total)/dŷ when computed")

    def as_row(self) -> dict[str, float]:
        return {
            "ce": self.ce,
            "bce": self.bce,
            "spatial": self.spatial,
            "iou": self.iou,
            "total": self.total,
        }
