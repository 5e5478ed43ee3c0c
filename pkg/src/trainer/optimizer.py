"""AdamW with decoupled weight decay and bias correction."""

import logging
from typing import Mapping

import numpy as np

from src.common.exceptions import ShapeError
from src.trainer.models import OptimizerState

logger = logging.getLogger(__name__)


def adamw_step(
    params: Mapping[str, np.ndarray],
    grads: Mapping[str, np.ndarray],
    state: OptimizerState,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
    weight_decay: float = 0.0,
) -> Mapping[str, np.ndarray]:
    """
    Apply one AdamW update in place.

    p ← p − lr·wd·p, then p ← p − lr·m̂/(√v̂ + eps). With weight_decay = 0 this
    is exactly Adam.

    Args:
        params: Name → parameter array (updated in place)
        grads: Name → gradient, same shapes
        state: Moments and step counter (updated)
        lr: Learning rate for this step

    Returns:
        The updated params mapping

    Raises:
        ShapeError: If a gradient is missing or mis-shaped
    """
    for name, value in params.items():
        if name not in grads:
            raise ShapeError(f"no gradient for parameter {name}")
        if grads[name].shape != value.shape:
            raise ShapeError(f"gradient for {name} has shape {grads[name].shape}, expected {value.shape}")

    state.step += 1
    bias1 = 1.0 - beta1 ** state.step
    bias2 = 1.0 - beta2 ** state.step
    for name, value in params.items():
        grad = grads[name]
        first, second = state.moments(name, value.shape)
        if weight_decay != 0.0:
            value -= lr * weight_decay * value
        first *= beta1
        first += (1.0 - beta1) * grad
        second *= beta2
        second += (1.0 - beta2) * grad * grad
        value -= lr * (first / bias1) / (np.sqrt(second / bias2) + eps)
    return params
