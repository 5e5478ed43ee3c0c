"""Metrics Module - AUC, mIoU, SIM, MAE and per-affordance evaluation reports."""

from src.metrics.models import (
    METRIC_NAMES,
    EvalConfig,
    SampleMetrics,
    MetricRow,
    MetricsReport,
    default_thresholds,
)
from src.metrics.scores import auc, iou, mean_iou, similarity, mae
from src.metrics.evaluation import (
    score_sample,
    aggregate_row,
    combine_rows,
    build_report,
    evaluate,
)
from src.metrics.report import format_table, format_kv, write_report, parse_kv

__all__ = [
    "METRIC_NAMES",
    "EvalConfig",
    "SampleMetrics",
    "MetricRow",
    "MetricsReport",
    "default_thresholds",
    "auc",
    "iou",
    "mean_iou",
    "similarity",
    "mae",
    "score_sample",
    "aggregate_row",
    "combine_rows",
    "build_report",
    "evaluate",
    "format_table",
    "format_kv",
    "write_report",
    "parse_kv",
]
