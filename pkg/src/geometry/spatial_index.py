"""KD-tree spatial index with brute-force-exact radius and kNN queries.

The tree prunes candidates; every answer is then decided by an exact
squared-distance comparison so results match a direct O(N) scan.
"""

import logging
from typing import List

import numpy as np
from sklearn.neighbors import KDTree

from src.common.exceptions import ParameterError
from src.geometry.models import NeighborList, PointCloud

logger = logging.getLogger(__name__)

# Relative slack on the pruning radius; exact filtering follows
_RADIUS_SLACK = 1e-9


class SpatialIndex:
    """Immutable balanced KD-tree over the coordinates of one PointCloud."""

    def __init__(self, coords: np.ndarray, leaf_size: int = 30):
        """
        Build the index.

        Args:
            coords: N×3 coordinates (copied and frozen)
            leaf_size: KD-tree leaf size
        """
        self._coords = np.array(coords, dtype=np.float64)
        self._coords.setflags(write=False)
        self._tree = KDTree(self._coords, metric="euclidean", leaf_size=leaf_size)

    @property
    def coords(self) -> np.ndarray:
        """Read-only indexed coordinates."""
        return self._coords

    @property
    def n_points(self) -> int:
        return int(self._coords.shape[0])

    def _sq_distances(self, query: np.ndarray, candidates: np.ndarray) -> np.ndarray:
        diff = self._coords[candidates] - query
        return np.sum(diff * diff, axis=1)

    def _candidates_within(self, query: np.ndarray, radius: float) -> np.ndarray:
        pruning_radius = radius * (1.0 + _RADIUS_SLACK) + 1e-12
        found = self._tree.query_radius(query.reshape(1, 3), r=pruning_radius)[0]
        return np.asarray(found, dtype=np.int64)

    def radius(self, i: int, radius: float) -> NeighborList:
        """Exact { j ≠ i : ‖x_i − x_j‖ ≤ radius }, sorted by index."""
        query = self._coords[i]
        candidates = self._candidates_within(query, radius)
        candidates = candidates[candidates != i]
        sq = self._sq_distances(query, candidates)
        keep = sq <= radius * radius
        order = np.argsort(candidates[keep], kind="stable")
        return NeighborList(indices=candidates[keep][order], sq_distances=sq[keep][order])

    def nearest(self, query: np.ndarray, k: int) -> NeighborList:
        """k nearest points, ordered by (distance, index)."""
        query = np.asarray(query, dtype=np.float64).reshape(3)
        distances, _ = self._tree.query(query.reshape(1, 3), k=k)
        kth = float(distances[0, -1])
        candidates = self._candidates_within(query, kth)
        sq = self._sq_distances(query, candidates)
        order = np.lexsort((candidates, sq))[:k]
        return NeighborList(indices=candidates[order], sq_distances=sq[order])


def build_index(cloud: PointCloud) -> SpatialIndex:
    """
    Build a SpatialIndex over a (normalized) cloud.

    Args:
        cloud: Point cloud

    Returns:
        SpatialIndex answering radius and kNN queries
    """
    index = SpatialIndex(cloud.coords)
    logger.debug(f"Built spatial index over {index.n_points} points")
    return index


def radius_neighbors(index: SpatialIndex, i: int, R_p: float) -> NeighborList:
    """
    Neighborhood of point i: all other points within R_p (boundary inclusive).

    Args:
        index: Spatial index
        i: Query point index
        R_p: Neighborhood radius (> 0)

    Returns:
        NeighborList sorted by index

    Raises:
        ParameterError: If R_p ≤ 0 or i is out of range
    """
    if not R_p > 0:
        raise ParameterError(f"radius must be positive, got {R_p}")
    if not 0 <= i < index.n_points:
        raise ParameterError(f"point index {i} out of range [0, {index.n_points})")
    return index.radius(int(i), float(R_p))


def radius_neighbors_all(index: SpatialIndex, R_p: float) -> List[NeighborList]:
    """Neighborhoods of every indexed point, in point order."""
    if not R_p > 0:
        raise ParameterError(f"radius must be positive, got {R_p}")
    return [index.radius(i, float(R_p)) for i in range(index.n_points)]


def knn(index: SpatialIndex, query: np.ndarray, k: int) -> NeighborList:
    """
    The k nearest indexed points to an arbitrary query location.

    Ties are broken by lower point index.

    Args:
        index: Spatial index
        query: 3-vector
        k: Neighbor count, 1 ≤ k ≤ N

    Returns:
        NeighborList ordered by (distance, index)

    Raises:
        ParameterError: If k is outside [1, N]
    """
    if k < 1 or k > index.n_points:
        raise ParameterError(f"k must be in [1, {index.n_points}], got {k}")
    return index.nearest(query, int(k))
