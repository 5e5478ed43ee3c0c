"""Experiments Module - run configuration, the action-token / spatial-loss ablation and the frame-count sweep."""

from src.experiments.models import ABLATION_ARMS, Arm, RunMetrics, AblationReport, FrameSweepReport
from src.experiments.run_config import DataConfig, RunConfig, build_run_config, load_run_config, write_resolved
from src.experiments.runner import (
    open_dataset,
    train_and_evaluate,
    run_ablation,
    run_frame_sweep,
    write_lines,
)

__all__ = [
    "ABLATION_ARMS",
    "Arm",
    "RunMetrics",
    "AblationReport",
    "FrameSweepReport",
    "DataConfig",
    "RunConfig",
    "build_run_config",
    "load_run_config",
    "write_resolved",
    "open_dataset",
    "train_and_evaluate",
    "run_ablation",
    "run_frame_sweep",
    "write_lines",
]
