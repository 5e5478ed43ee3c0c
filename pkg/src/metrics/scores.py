"""Per-sample affordance metrics: AUC, threshold-swept mIoU, SIM and MAE."""

import math
from typing import Sequence

import numpy as np
from sklearn.metrics import roc_auc_score

from src.common.exceptions import InvalidInputError, ParameterError, ShapeError, UndefinedMetricError


def _pair(scores, labels) -> tuple:
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels, dtype=np.float64).reshape(-1)
    if scores.shape != labels.shape:
        raise ShapeError(f"scores ({scores.shape[0]}) and labels ({labels.shape[0]}) differ in length")
    return scores, labels


def auc(scores, labels, bin_threshold: float = 0.5) -> float:
    """
    Area under the ROC curve with labels binarized at bin_threshold.

    Ties between a positive and a negative count ½.

    Raises:
        UndefinedMetricError: If the binarized labels hold a single class
    """
    scores, labels = _pair(scores, labels)
    positives = labels >= bin_threshold
    if positives.all() or not positives.any():
        raise UndefinedMetricError("AUC is undefined for single-class labels")
    return float(roc_auc_score(positives.astype(np.int64), scores))


def iou(predicted: np.ndarray, truth: np.ndarray) -> float:
    """IoU of two boolean masks; 0 when both are empty."""
    union = np.count_nonzero(predicted | truth)
    if union == 0:
        return 0.0
    return np.count_nonzero(predicted & truth) / union


def mean_iou(scores, labels, thresholds: Sequence[float], bin_threshold: float = 0.5) -> float:
    """
    Mean IoU of (scores ≥ t) against the binarized labels over a threshold sweep.

    Raises:
        ParameterError: Empty threshold list
        UndefinedMetricError: No positive label
    """
    if len(thresholds) == 0:
        raise ParameterError("mIoU needs at least one prediction threshold")
    scores, labels = _pair(scores, labels)
    truth = labels >= bin_threshold
    if not truth.any():
        raise UndefinedMetricError("mIoU is undefined without positive labels")
    return math.fsum(iou(scores >= t, truth) for t in thresholds) / len(thresholds)


def similarity(pred, gt) -> float:
    """
    Histogram intersection of the two maps after normalizing each to sum 1.

    Raises:
        InvalidInputError: Negative entries
        UndefinedMetricError: A map sums to zero
    """
    pred, gt = _pair(pred, gt)
    if np.any(pred < 0) or np.any(gt < 0):
        raise InvalidInputError("SIM needs nonnegative maps")
    pred_sum, gt_sum = math.fsum(pred), math.fsum(gt)
    if pred_sum == 0.0 or gt_sum == 0.0:
        raise UndefinedMetricError("SIM is undefined for an all-zero map")
    return math.fsum(np.minimum(pred / pred_sum, gt / gt_sum))


def mae(pred, gt) -> float:
    """Mean absolute error."""
    pred, gt = _pair(pred, gt)
    if pred.size == 0:
        raise ShapeError("MAE needs at least one point")
    return math.fsum(np.abs(pred - gt)) / pred.size
