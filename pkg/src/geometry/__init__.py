"""Geometry Module - point clouds, normalization, spatial indexing and sampling."""

from src.geometry.models import PointCloud, NeighborList
from src.geometry.normalization import normalize_cloud
from src.geometry.spatial_index import (
    SpatialIndex,
    build_index,
    radius_neighbors,
    radius_neighbors_all,
    knn,
)
from src.geometry.sampling import farthest_point_sample, canonical_order
from src.geometry.cloud_io import save_cloud, load_cloud, parse_cloud, format_cloud

__all__ = [
    "PointCloud",
    "NeighborList",
    "normalize_cloud",
    "SpatialIndex",
    "build_index",
    "radius_neighbors",
    "radius_neighbors_all",
    "knn",
    "farthest_point_sample",
    "canonical_order",
    "save_cloud",
    "load_cloud",
    "parse_cloud",
    "format_cloud",
]
