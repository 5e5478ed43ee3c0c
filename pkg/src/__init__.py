"""
afford3d - desk-scale 3D affordance grounding.

Sub-packages: geometry, autodiff, model, losses, trainer, dataset, metrics,
experiments, cli, and common (shared infrastructure).
"""

__version__ = "0.1.0"
