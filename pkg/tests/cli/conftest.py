"""Shared fixtures for CLI tests."""

import pytest
import yaml

from src.cli.main import main

TINY_RUN = {
    "seed": 0,
    "model": {
        "d_model": 6, "d_video": 4, "d_action": 4, "patch_hidden": 5, "mlp_hidden": 5,
        "num_tokens": 8, "k_patch": 4, "frames": 2,
    },
    "loss": {"radius": 0.3},
    "train": {"learning_rate": 1.0e-2, "max_steps": 4},
}


@pytest.fixture
def tiny_config(tmp_path):
    """A run config small enough to train in a few seconds."""
    path = tmp_path / "tiny.yaml"
    path.write_text(yaml.safe_dump(TINY_RUN))
    return path


@pytest.fixture
def synth_dir(tmp_path):
    """A synthetic dataset made through the CLI."""
    out = tmp_path / "synth"
    assert main(["dataset", "synth", "--types", "2", "--samples", "5", "--points", "64", "--seed", "7", "--out", str(out)]) == 0
    return out
