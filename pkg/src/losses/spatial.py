"""Neighborhood-averaged Gaussian spatial weights."""

import logging
import math

import numpy as np

from src.common.exceptions import ParameterError
from src.geometry.spatial_index import SpatialIndex
from src.losses.models import SpatialWeights

logger = logging.getLogger(__name__)


def spatial_weights(coords: np.ndarray, R_p: float, sigma: float) -> SpatialWeights:
    """
    ω_i = mean over neighbors j within R_p of exp(−‖x_i − x_j‖² / 2σ²).

    Points with an empty neighborhood get ω_i = 1. Weights depend only on
    the coordinates and (R_p, σ).

    Args:
        coords: N×3 normalized coordinates
        R_p: Neighborhood radius (> 0)
        sigma: Gaussian decay scale (> 0)

    Returns:
        SpatialWeights

    Raises:
        ParameterError: If R_p or sigma is not positive
    """
    if not R_p > 0:
        raise ParameterError(f"radius must be positive, got {R_p}")
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")

    index = SpatialIndex(coords)
    two_sigma_sq = 2.0 * sigma * sigma
    omega = np.ones(index.n_points)
    empty = 0
    for i in range(index.n_points):
        neighbors = index.radius(i, float(R_p))
        if len(neighbors) == 0:
            empty += 1
            continue
        kernel = np.exp(-neighbors.sq_distances / two_sigma_sq)
        # Keep ω strictly positive under underflow
        omega[i] = max(math.fsum(kernel) / len(neighbors), np.finfo(np.float64).tiny)

    if empty:
        logger.debug(f"{empty}/{index.n_points} points have no neighbor within R_p={R_p}")
    return SpatialWeights(omega=omega, radius=float(R_p), sigma=float(sigma), empty_neighborhoods=empty)
