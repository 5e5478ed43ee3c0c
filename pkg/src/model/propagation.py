"""Geometric-guided up-sampling of sparse token features onto every point."""

import logging

import numpy as np

from src.autodiff import ops
from src.autodiff.tensor import Tensor
from src.common.exceptions import ShapeError
from src.geometry.spatial_index import SpatialIndex, knn
from src.model.models import DensePointFeatures, TokenFeatures

logger = logging.getLogger(__name__)

INTERPOLATION_NEIGHBORS = 3
INVERSE_DISTANCE_DELTA = 1e-8
COINCIDENCE_TOLERANCE = 1e-12


def interpolation_weights(centers: np.ndarray, dense_coords: np.ndarray) -> np.ndarray:
    """
    Row-normalized inverse-squared-distance weights over the nearest token centers.

    Each row uses min(3, M) nearest centers with w = 1/(d² + 1e-8). A point
    within 1e-12 of a center gets a one-hot row on that center.

    Returns:
        N×M matrix whose rows sum to 1
    """
    centers = np.asarray(centers, dtype=np.float64)
    dense_coords = np.asarray(dense_coords, dtype=np.float64)
    if centers.ndim != 2 or centers.shape[1] != 3 or centers.shape[0] < 1:
        raise ShapeError(f"token centers must be M×3 with M ≥ 1, got {centers.shape}")
    if dense_coords.ndim != 2 or dense_coords.shape[1] != 3:
        raise ShapeError(f"dense coordinates must be N×3, got {dense_coords.shape}")

    m = centers.shape[0]
    k = min(INTERPOLATION_NEIGHBORS, m)
    index = SpatialIndex(centers)
    weights = np.zeros((dense_coords.shape[0], m))
    for row, point in enumerate(dense_coords):
        neighbors = knn(index, point, k)
        if neighbors.sq_distances[0] <= COINCIDENCE_TOLERANCE ** 2:
            weights[row, neighbors.indices[0]] = 1.0
            continue
        w = 1.0 / (neighbors.sq_distances + INVERSE_DISTANCE_DELTA)
        weights[row, neighbors.indices] = w / w.sum()
    return weights


def propagate_features(tokens: TokenFeatures, dense_coords: np.ndarray) -> DensePointFeatures:
    """
    Interpolate token features onto dense points.

    The weights are constants of the geometry, so gradients flow only into
    the token features.

    Args:
        tokens: M token features and centers (same frame as dense_coords)
        dense_coords: N×3 coordinates

    Returns:
        DensePointFeatures with N rows
    """
    weights = interpolation_weights(tokens.centers, dense_coords)
    return propagate_with_weights(tokens.features, weights)


def propagate_with_weights(features: Tensor, weights: np.ndarray) -> DensePointFeatures:
    """Dense features from precomputed interpolation weights."""
    return DensePointFeatures(features=ops.matmul(Tensor(weights), features))
