"""Central finite-difference checks against tape gradients."""

import logging
from typing import Callable, Optional, Sequence

import numpy as np

from src.autodiff.tape import Tape, backward
from src.autodiff.tensor import Tensor
from src.common.exceptions import ParameterError

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-6


def finite_difference_check(
    f: Callable[[Tensor], Tensor],
    x: Tensor,
    h: float = DEFAULT_STEP,
    coords: Optional[Sequence[int]] = None,
) -> float:
    """
    Compare the tape gradient of a scalar function with central differences.

    Args:
        f: Maps a tensor shaped like x to a one-element tensor
        x: Evaluation point
        h: Difference step (> 0)
        coords: Flat coordinates to check (default: all)

    Returns:
        max over checked coordinates of |g_ad − g_fd| / max(1, |g_fd|)

    Raises:
        ParameterError: If h ≤ 0
    """
    if not h > 0:
        raise ParameterError(f"difference step must be positive, got {h}")

    base = np.array(x.values, dtype=np.float64)
    leaf = Tensor(base.copy(), requires_grad=True, name=x.name)
    with Tape() as tape:
        out = f(leaf)
    backward(tape, out)
    analytic = leaf.grad.reshape(-1)

    indices = range(base.size) if coords is None else coords
    worst = 0.0
    for idx in indices:
        plus = base.copy()
        minus = base.copy()
        plus.flat[idx] += h
        minus.flat[idx] -= h
        numeric = (f(Tensor(plus)).item() - f(Tensor(minus)).item()) / (2.0 * h)
        error = abs(analytic[idx] - numeric) / max(1.0, abs(numeric))
        worst = max(worst, error)

    logger.debug(f"Finite-difference check over {len(indices)} coordinates: max rel err {worst:.3e}")
    return worst
