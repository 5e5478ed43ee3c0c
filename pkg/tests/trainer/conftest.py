"""Shared fixtures for trainer tests."""

import numpy as np
import pytest

from src.geometry import PointCloud
from src.losses import LossConfig
from src.model import EmbeddingSource, ModelConfig, ModelSample


def labeled_sample(seed: int, affordance: str = "grasp", n_points: int = 64) -> ModelSample:
    """A random cloud whose positive region is one half-space."""
    rng = np.random.default_rng(seed)
    coords = rng.normal(size=(n_points, 3))
    labels = (coords[:, 0] > 0.3).astype(float)
    return ModelSample(
        cloud=PointCloud(coords=coords, labels=labels),
        embedding_source=EmbeddingSource.parse(f"synth:{seed}"),
        video_id=f"vid-{seed:03d}",
        affordance=affordance,
    )


@pytest.fixture
def tiny_model_config():
    return ModelConfig(
        d_model=6, d_video=4, d_action=4, patch_hidden=5, mlp_hidden=5,
        num_tokens=8, k_patch=4, frames=2,
    )


@pytest.fixture
def loss_config():
    return LossConfig(radius=0.3)


@pytest.fixture
def samples():
    return [labeled_sample(seed) for seed in range(3)]


@pytest.fixture
def make_sample():
    """Factory for labeled half-space samples."""
    return labeled_sample
