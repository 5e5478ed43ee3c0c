"""Shared fixtures for model tests."""

import numpy as np
import pytest

from src.geometry import PointCloud
from src.model import EmbeddingSource, ModelConfig, ModelParams, ModelSample


@pytest.fixture
def small_config():
    """Narrow widths so oracles stay fast."""
    return ModelConfig(
        d_model=8, d_video=6, d_action=5, patch_hidden=7, mlp_hidden=9,
        num_tokens=6, k_patch=4, frames=2,
    )


@pytest.fixture
def small_params(small_config):
    return ModelParams.initialize(small_config, seed=3)


@pytest.fixture
def sample_cloud():
    """A 64-point random cloud with soft labels."""
    rng = np.random.default_rng(17)
    return PointCloud(coords=rng.normal(size=(64, 3)), labels=rng.uniform(size=64))


@pytest.fixture
def sample(sample_cloud):
    return ModelSample(
        cloud=sample_cloud,
        embedding_source=EmbeddingSource.parse("synth:5"),
        video_id="vid-001",
        affordance="grasp",
    )
