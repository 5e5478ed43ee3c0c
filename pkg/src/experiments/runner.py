"""Train-then-evaluate drivers for the ablation and the frame sweep."""

import logging
from pathlib import Path
from typing import Optional, Sequence, Union

from src.common.exceptions import ConfigurationError
from src.dataset.manifest import Manifest, entry_to_sample, load_manifest
from src.dataset.taxonomy import load_taxonomy
from src.experiments.models import ABLATION_ARMS, AblationReport, Arm, FrameSweepReport, RunMetrics
from src.experiments.run_config import RunConfig
from src.metrics.evaluation import evaluate
from src.metrics.models import MetricsReport
from src.model.models import SUPPORTED_FRAMES, ModelConfig
from src.trainer.training import train

logger = logging.getLogger(__name__)


def open_dataset(run_config: RunConfig, manifest_path: Union[str, Path, None] = None) -> Manifest:
    """Load the manifest named by the argument or by the run's data block."""
    path = manifest_path or run_config.data.manifest
    if path is None:
        raise ConfigurationError("no manifest given (data.manifest or --manifest)")
    taxonomy = load_taxonomy(run_config.data.taxonomy) if run_config.data.taxonomy else None
    return load_manifest(path, taxonomy=taxonomy)


def train_and_evaluate(run_config: RunConfig, manifest: Manifest) -> MetricsReport:
    """Train on the manifest's train split and score its eval split."""
    samples = [entry_to_sample(e, manifest.base_dir) for e in manifest.split("train")]
    result = train(samples, run_config.model, run_config.loss, run_config.train, config_hash=run_config.config_hash())
    return evaluate(
        manifest.entries,
        result.params,
        run_config.model,
        run_config.eval,
        split_label=run_config.data.split_label,
        base_dir=manifest.base_dir,
        config_hash=run_config.config_hash(),
    )


def _with_seed(run_config: RunConfig, seed: int) -> RunConfig:
    return run_config.model_copy(update={
        "seed": seed,
        "model": run_config.model.model_copy(update={"init_seed": seed}),
        "train": run_config.train.model_copy(update={"seed": seed}),
    })


def run_ablation(
    run_config: RunConfig,
    manifest_path: Union[str, Path, None] = None,
    seeds: Sequence[int] = tuple(range(10)),
    arms: Sequence[Arm] = ABLATION_ARMS,
) -> AblationReport:
    """
    Train and evaluate the action-token × spatial-loss arms for each seed.

    The spatial arms keep the configured lambda_spatial; the others set it to 0.
    Every arm of a seed starts from the same initialization and batch order.

    Raises:
        ConfigurationError: If no arm is given
    """
    if not arms:
        raise ConfigurationError("ablation needs at least one arm")
    manifest = open_dataset(run_config, manifest_path)
    report = AblationReport(seeds=list(seeds), config_hash=run_config.config_hash())
    for seed in seeds:
        seeded = _with_seed(run_config, seed)
        for arm in arms:
            config = seeded.model_copy(update={
                "model": seeded.model.model_copy(update={"use_action_tokens": arm.use_action_tokens}),
                "loss": seeded.loss.model_copy(
                    update={"lambda_spatial": seeded.loss.lambda_spatial if arm.spatial_loss else 0.0}
                ),
            })
            metrics = train_and_evaluate(config, manifest)
            report.results.append(RunMetrics(label=arm.name, seed=seed, values=dict(metrics.overall.values)))
            logger.info(f"Ablation seed {seed} arm {arm.name}: mIoU={metrics.overall.values['miou']}")
    logger.info(f"Spatial loss held or improved mIoU on {report.spatial_wins()}/{len(seeds)} seeds")
    return report


def run_frame_sweep(
    run_config: RunConfig,
    manifest_path: Union[str, Path, None] = None,
    frames: Sequence[int] = SUPPORTED_FRAMES,
) -> FrameSweepReport:
    """Train and evaluate once per frame count; only validity is checked."""
    manifest = open_dataset(run_config, manifest_path)
    report = FrameSweepReport(config_hash=run_config.config_hash())
    for F in frames:
        model = ModelConfig.model_validate({**run_config.model.model_dump(), "frames": F})
        config = run_config.model_copy(update={"model": model})
        metrics = train_and_evaluate(config, manifest)
        report.results.append(RunMetrics(label=f"F={F}", seed=run_config.seed, values=dict(metrics.overall.values)))
        logger.info(f"Frame sweep F={F}: mIoU={metrics.overall.values['miou']}")
    if not report.valid:
        logger.warning("Frame sweep produced non-finite or undefined metrics")
    return report


def write_lines(lines: Sequence[str], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return path
