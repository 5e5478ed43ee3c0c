"""CLI Module - the afford3d executable and its heatmap export."""

from src.cli.heatmap import heatmap_colors, read_heatmap_ply, write_heatmap_ply

__all__ = ["heatmap_colors", "read_heatmap_ply", "write_heatmap_ply"]
