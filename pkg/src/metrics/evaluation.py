"""Split evaluation: per-sample metrics grouped by affordance type."""

import logging
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from src.common.config import Config
from src.common.exceptions import DatasetError, InvalidInputError, UndefinedMetricError
from src.dataset.manifest import entry_to_sample
from src.dataset.models import ManifestEntry
from src.dataset.pairing import validate_pairing
from src.metrics.models import (
    METRIC_NAMES,
    EvalConfig,
    MetricRow,
    MetricsReport,
    SampleMetrics,
)
from src.metrics.scores import auc, mae, mean_iou, similarity
from src.model.models import ModelConfig, ParamsLike
from src.model.pipeline import forward

logger = logging.getLogger(__name__)


def _guarded(name: str, video_id: str, compute) -> Optional[float]:
    try:
        return compute()
    except UndefinedMetricError as e:
        logger.warning(f"Skipping {name} for {video_id}: {e.message}")
        return None


def score_sample(
    entry: ManifestEntry,
    scores: np.ndarray,
    labels: np.ndarray,
    config: EvalConfig,
) -> SampleMetrics:
    """All four metrics of one prediction; undefined ones are None."""
    vid = entry.video_id
    metrics = SampleMetrics(
        video_id=vid,
        affordance_type=entry.affordance_type,
        object_class=entry.object_class,
        n_points=int(labels.shape[0]),
        miou=_guarded("mIoU", vid, lambda: mean_iou(scores, labels, config.thresholds, config.bin_threshold)),
        auc=_guarded("AUC", vid, lambda: auc(scores, labels, config.bin_threshold)),
        sim=_guarded("SIM", vid, lambda: similarity(scores, labels)),
        mae=mae(scores, labels),
    )
    logger.debug(
        f"{vid} ({entry.affordance_type}): mIoU={metrics.miou} AUC={metrics.auc} "
        f"SIM={metrics.sim} MAE={metrics.mae}"
    )
    return metrics


def aggregate_row(name: str, samples: List[SampleMetrics]) -> MetricRow:
    """Mean of each metric over the samples where it is defined."""
    values: Dict[str, Optional[float]] = {}
    counts: Dict[str, int] = {}
    for metric in METRIC_NAMES:
        defined = [s.value(metric) for s in samples if s.value(metric) is not None]
        counts[metric] = len(defined)
        values[metric] = math.fsum(defined) / len(defined) if defined else None
    return MetricRow(name=name, samples=len(samples), values=values, counts=counts)


def combine_rows(rows: List[MetricRow], name: str = "overall") -> MetricRow:
    """Count-weighted mean of per-type rows, metric by metric."""
    values: Dict[str, Optional[float]] = {}
    counts: Dict[str, int] = {}
    for metric in METRIC_NAMES:
        weighted = [(r.counts[metric], r.values[metric]) for r in rows if r.counts[metric] > 0]
        total = sum(c for c, _ in weighted)
        counts[metric] = total
        values[metric] = math.fsum(c * v for c, v in weighted) / total if total else None
    return MetricRow(name=name, samples=sum(r.samples for r in rows), values=values, counts=counts)


def build_report(
    samples: List[SampleMetrics],
    split_label: str,
    config: EvalConfig,
    config_hash: str = "",
    oracle: bool = False,
) -> MetricsReport:
    """Group samples by affordance type (sorted) and aggregate."""
    grouped: Dict[str, List[SampleMetrics]] = defaultdict(list)
    for sample in samples:
        grouped[sample.affordance_type].append(sample)
    rows = [aggregate_row(name, grouped[name]) for name in sorted(grouped)]
    return MetricsReport(
        split_label=split_label,
        rows=rows,
        overall=combine_rows(rows),
        samples=samples,
        bin_threshold=config.bin_threshold,
        thresholds=list(config.thresholds),
        config_hash=config_hash,
        oracle=oracle,
    )


def evaluate(
    entries: List[ManifestEntry],
    params: Optional[ParamsLike],
    model_config: ModelConfig,
    eval_config: Optional[EvalConfig] = None,
    split_label: str = "seen",
    base_dir: Optional[Path] = None,
    oracle: bool = False,
    config_hash: str = "",
) -> MetricsReport:
    """
    Evaluate one split of a manifest.

    Args:
        entries: All manifest entries; the split named by eval_config.split is scored
        params: Model parameters (unused in oracle mode)
        model_config: Model widths and sampling counts
        eval_config: Metric protocol
        split_label: Report label, e.g. "seen" or "unseen"
        base_dir: Directory relative entry paths resolve against
        oracle: Score each sample with its own labels, bypassing the model
        config_hash: Recorded in the report header

    Returns:
        MetricsReport with rows in sorted affordance order

    Raises:
        DatasetError: Pairing violations or an empty split
        InvalidInputError: A sample without labels
    """
    eval_config = eval_config or EvalConfig()
    pairing = validate_pairing(entries)
    if not pairing.valid:
        details = "; ".join(v.describe() for v in pairing.violations)
        raise DatasetError(f"split fails pairing validation: {details}")

    selected = [e for e in entries if e.split == eval_config.split]
    if not selected:
        raise DatasetError(f"no '{eval_config.split}' entries to evaluate")
    if params is None and not oracle:
        raise InvalidInputError("evaluation needs model parameters unless oracle mode is on")

    def run(entry: ManifestEntry) -> SampleMetrics:
        sample = entry_to_sample(entry, base_dir)
        labels = sample.cloud.labels
        if labels is None:
            raise InvalidInputError(f"{entry.point_cloud_path}: evaluation needs per-point labels")
        scores = labels if oracle else forward(sample, params, model_config)
        return score_sample(entry, scores, labels, eval_config)

    workers = min(Config.eval_threads(), len(selected))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        samples = list(executor.map(run, selected))

    report = build_report(samples, split_label, eval_config, config_hash=config_hash, oracle=oracle)
    logger.info(
        f"Evaluated {len(samples)} {eval_config.split} samples ({split_label}): "
        + ", ".join(f"{m}={report.overall.values[m]}" for m in METRIC_NAMES)
    )
    return report
