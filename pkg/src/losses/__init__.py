"""Losses Module - spatial weights and the composite segmentation objective."""

from src.losses.models import LossConfig, LossWeights, SpatialWeights, LossTerm, LossBreakdown
from src.losses.spatial import spatial_weights
from src.losses.objectives import (
    spatial_dice_loss,
    bce_loss,
    iou_loss,
    total_loss,
    composite_objective,
    loss_node,
)

__all__ = [
    "LossConfig",
    "LossWeights",
    "SpatialWeights",
    "LossTerm",
    "LossBreakdown",
    "spatial_weights",
    "spatial_dice_loss",
    "bce_loss",
    "iou_loss",
    "total_loss",
    "composite_objective",
    "loss_node",
]
