"""Linear warmup followed by cosine decay to zero."""

import math

from src.common.exceptions import ParameterError


def warmup_steps(total: int, warmup_ratio: float) -> int:
    """min(ceil(ratio·total), total − 1), so the final step always reaches lr 0."""
    if total <= 1:
        return 0
    return min(math.ceil(warmup_ratio * total), total - 1)


def cosine_schedule(step: int, total: int, warmup_ratio: float, base_lr: float) -> float:
    """
    Learning rate at a given step.

    Args:
        step: Step index in [0, total]
        total: Total steps (≥ 1)
        warmup_ratio: Warmup fraction in [0, 1)
        base_lr: Peak learning rate

    Returns:
        0 at step 0 (when there is warmup), base_lr at the end of warmup,
        0 at step = total

    Raises:
        ParameterError: If step is outside [0, total], total < 1 or the ratio is outside [0, 1)
    """
    if total < 1:
        raise ParameterError(f"total steps must be ≥ 1, got {total}")
    if step < 0 or step > total:
        raise ParameterError(f"step must be in [0, {total}], got {step}")
    if not 0.0 <= warmup_ratio < 1.0:
        raise ParameterError(f"warmup ratio must be in [0, 1), got {warmup_ratio}")

    warmup = warmup_steps(total, warmup_ratio)
    if step < warmup:
        return base_lr * step / warmup
    progress = (step - warmup) / (total - warmup)
    return 0.5 * base_lr * (1.0 + math.cos(math.pi * progress))
