"""Unit tests for the per-sample metrics against brute-force oracles."""

import itertools
import math

import numpy as np
import pytest

from src.common.exceptions import ParameterError, ShapeError, UndefinedMetricError
from src.metrics import auc, default_thresholds, mae, mean_iou, similarity


def pairwise_auc(scores, labels):
    """O(N²) probability that a positive outranks a negative, ties ½."""
    pos = scores[labels >= 0.5]
    neg = scores[labels < 0.5]
    total = 0.0
    for p, n in itertools.product(pos, neg):
        total += 1.0 if p > n else 0.5 if p == n else 0.0
    return total / (len(pos) * len(neg))


class TestAUC:
    """Test AUC."""

    def test_perfect_order(self):
        assert auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0

    def test_all_equal_scores(self):
        """Test that ties count one half."""
        assert auc([0.3] * 6, [1, 0, 1, 0, 0, 1]) == 0.5

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_pairwise_oracle(self, seed):
        """Test 200 random points (with ties) against the pairwise comparator."""
        rng = np.random.default_rng(seed)
        scores = np.round(rng.uniform(size=200), 2)
        labels = rng.uniform(size=200)
        assert abs(auc(scores, labels) - pairwise_auc(scores, labels)) <= 1e-9

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(7)
        scores, labels = rng.uniform(size=50), rng.integers(0, 2, 50)
        assert auc(scores, labels) == pytest.approx(auc(np.exp(3 * scores), labels), abs=1e-12)

    def test_single_class_undefined(self):
        """Test that single-class labels are undefined, not zero."""
        with pytest.raises(UndefinedMetricError):
            auc([0.1, 0.9], [0.0, 0.2])

    def test_soft_labels_binarized(self):
        assert auc([0.9, 0.1], [0.6, 0.4]) == 1.0

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            auc([0.1, 0.2], [1])


class TestMeanIoU:
    """Test the threshold-swept mIoU."""

    def test_scores_equal_binary_labels(self):
        labels = np.array([1.0, 0.0, 1.0, 0.0])
        assert mean_iou(labels, labels, default_thresholds()) == 1.0

    def test_disjoint(self):
        assert mean_iou([0.0, 1.0], [1.0, 0.0], default_thresholds()) == 0.0

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_set_oracle(self, seed):
        """Test the sweep against per-threshold set computations."""
        rng = np.random.default_rng(seed)
        scores, labels = rng.uniform(size=100), rng.uniform(size=100)
        truth = {i for i in range(100) if labels[i] >= 0.5}
        ious = []
        for t in default_thresholds():
            predicted = {i for i in range(100) if scores[i] >= t}
            ious.append(len(predicted & truth) / len(predicted | truth))
        assert abs(mean_iou(scores, labels, default_thresholds()) - sum(ious) / len(ious)) <= 1e-12

    def test_permutation_invariant(self):
        rng = np.random.default_rng(4)
        scores, labels = rng.uniform(size=64), rng.uniform(size=64)
        perm = rng.permutation(64)
        assert mean_iou(scores, labels, [0.3, 0.6]) == mean_iou(scores[perm], labels[perm], [0.3, 0.6])

    def test_empty_thresholds(self):
        with pytest.raises(ParameterError):
            mean_iou([0.5], [1.0], [])

    def test_no_positive_labels(self):
        with pytest.raises(UndefinedMetricError):
            mean_iou([0.5, 0.2], [0.0, 0.1], [0.5])


class TestSimilarity:
    """Test SIM."""

    def test_identical(self):
        assert similarity([0.2, 0.8, 0.0], [0.2, 0.8, 0.0]) == pytest.approx(1.0, abs=1e-15)

    def test_disjoint_support(self):
        assert similarity([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_histogram_intersection_oracle(self):
        rng = np.random.default_rng(2)
        p, g = rng.uniform(size=300), rng.uniform(size=300)
        expected = math.fsum(min(a / p.sum(), b / g.sum()) for a, b in zip(p, g))
        assert abs(similarity(p, g) - expected) <= 1e-12

    def test_symmetric(self):
        rng = np.random.default_rng(3)
        p, g = rng.uniform(size=40), rng.uniform(size=40)
        assert similarity(p, g) == pytest.approx(similarity(g, p), abs=1e-15)

    def test_zero_map_undefined(self):
        with pytest.raises(UndefinedMetricError):
            similarity([0.0, 0.0], [1.0, 0.0])


class TestMAE:
    """Test MAE."""

    def test_identical(self):
        assert mae([0.1, 0.7], [0.1, 0.7]) == 0.0

    def test_complement_of_binary(self):
        gt = np.array([1.0, 0.0, 1.0])
        assert mae(1.0 - gt, gt) == 1.0

    def test_direct_oracle(self):
        rng = np.random.default_rng(5)
        p, g = rng.uniform(size=500), rng.uniform(size=500)
        assert abs(mae(p, g) - np.mean(np.abs(p - g))) <= 1e-15

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            mae([0.1], [0.1, 0.2])
