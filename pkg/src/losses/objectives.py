"""Segmentation objectives with closed-form gradients w.r.t. predictions.

All reductions use math.fsum, so values do not depend on point order.
"""

import logging
import math
from typing import Optional, Union

import numpy as np

from src.autodiff.ops import scalar_node
from src.autodiff.tensor import Tensor
from src.common.exceptions import InvalidInputError, ParameterError, ShapeError
from src.losses.models import LossBreakdown, LossConfig, LossTerm, LossWeights, SpatialWeights

logger = logging.getLogger(__name__)


def _vectors(y, y_hat, what: str) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    y_hat = np.asarray(y_hat, dtype=np.float64).reshape(-1)
    if y.shape != y_hat.shape:
        raise ShapeError(f"{what}: labels ({y.shape[0]}) and predictions ({y_hat.shape[0]}) differ in length")
    return y, y_hat


def _unit_interval(value: float) -> float:
    return min(1.0, max(0.0, value))


def spatial_dice_loss(
    y,
    y_hat,
    omega: Union[SpatialWeights, np.ndarray],
    epsilon: float = 1e-6,
) -> LossTerm:
    """
    ω-weighted Dice loss: 1 − 2Σωyŷ / (Σωy² + Σωŷ² + ε).

    Args:
        y: Ground-truth labels in [0, 1]
        y_hat: Predicted probabilities in [0, 1]
        omega: Spatial weights (or a raw weight vector)
        epsilon: Denominator guard (> 0)

    Returns:
        LossTerm with value in [0, 1] and d(loss)/dŷ
    """
    y, y_hat = _vectors(y, y_hat, "spatial_dice_loss")
    w = omega.omega if isinstance(omega, SpatialWeights) else np.asarray(omega, dtype=np.float64)
    if w.shape != y.shape:
        raise ShapeError(f"spatial_dice_loss: {w.shape[0]} weights for {y.shape[0]} points")
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")

    overlap = math.fsum(w * y * y_hat)
    denominator = math.fsum(w * y * y) + math.fsum(w * y_hat * y_hat) + epsilon
    value = 1.0 - 2.0 * overlap / denominator
    grad = -2.0 * w * (y * denominator - 2.0 * overlap * y_hat) / (denominator * denominator)
    return LossTerm(value=_unit_interval(value), grad=grad)


def bce_loss(y, y_hat, clamp: float = 1e-7) -> LossTerm:
    """
    Mean binary cross-entropy with predictions clamped to [clamp, 1 − clamp].

    Clamped coordinates have zero gradient.
    """
    y, y_hat = _vectors(y, y_hat, "bce_loss")
    if not 0 < clamp < 0.5:
        raise ParameterError(f"clamp must be in (0, 0.5), got {clamp}")
    n = y.shape[0]
    p = np.clip(y_hat, clamp, 1.0 - clamp)
    per_point = -(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))
    value = math.fsum(per_point) / n
    inside = (y_hat > clamp) & (y_hat < 1.0 - clamp)
    grad = np.where(inside, (-y / p + (1.0 - y) / (1.0 - p)) / n, 0.0)
    return LossTerm(value=max(0.0, value), grad=grad)


def iou_loss(y, y_hat, epsilon: float = 1e-6) -> LossTerm:
    """Soft IoU loss: 1 − Σyŷ / (Σy + Σŷ − Σyŷ + ε)."""
    y, y_hat = _vectors(y, y_hat, "iou_loss")
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    intersection = math.fsum(y * y_hat)
    union = math.fsum(y) + math.fsum(y_hat) - intersection + epsilon
    value = 1.0 - intersection / union
    grad = -(y * union - intersection * (1.0 - y)) / (union * union)
    return LossTerm(value=_unit_interval(value), grad=grad)


def total_loss(
    ce: Optional[float],
    bce: float,
    spatial: float,
    iou: float,
    weights: LossWeights,
    grad: Optional[np.ndarray] = None,
) -> LossBreakdown:
    """
    λ_ce·ce + λ_bce·bce + λ_spatial·spatial + λ_iou·iou (absent ce counts as 0).

    Raises:
        InvalidInputError: If any term is negative or non-finite
    """
    ce = 0.0 if ce is None else float(ce)
    terms = {"ce": ce, "bce": float(bce), "spatial": float(spatial), "iou": float(iou)}
    for name, value in terms.items():
        if not math.isfinite(value) or value < 0:
            raise InvalidInputError(f"loss term {name} must be finite and ≥ 0, got {value}")

    total = (
        weights.lambda_ce * terms["ce"]
        + weights.lambda_bce * terms["bce"]
        + weights.lambda_spatial * terms["spatial"]
        + weights.lambda_iou * terms["iou"]
    )
    return LossBreakdown(total=total, grad=grad, **terms)


def composite_objective(
    y,
    y_hat,
    omega: SpatialWeights,
    config: LossConfig,
    ce: Optional[float] = None,
) -> LossBreakdown:
    """
    Evaluate every segmentation term and the weighted total with its gradient.

    Args:
        y: Ground-truth labels
        y_hat: Predicted probabilities
        omega: Spatial weights of the sample's cloud
        config: Loss configuration (ε, clamp, λ)
        ce: Optional text cross-entropy value (held constant)

    Returns:
        LossBreakdown including d(total)/dŷ
    """
    weights = config.weights()
    bce = bce_loss(y, y_hat, config.bce_clamp)
    spatial = spatial_dice_loss(y, y_hat, omega, config.epsilon)
    iou = iou_loss(y, y_hat, config.epsilon)
    grad = (
        weights.lambda_bce * bce.grad
        + weights.lambda_spatial * spatial.grad
        + weights.lambda_iou * iou.grad
    )
    return total_loss(ce, bce.value, spatial.value, iou.value, weights, grad=grad)


def loss_node(probabilities: Tensor, breakdown: LossBreakdown) -> Tensor:
    """Attach a breakdown's total and gradient to the tape as a 1×1 tensor."""
    if breakdown.grad is None:
        raise ParameterError("breakdown carries no gradient")
    gradient = breakdown.grad.reshape(probabilities.shape)
    return scalar_node(probabilities, breakdown.total, gradient, op="composite_loss")
