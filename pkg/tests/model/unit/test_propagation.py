"""Unit tests for inverse-distance feature propagation."""

import numpy as np

from src.autodiff import Tensor
from src.model import TokenFeatures, interpolation_weights, propagate_features


def make_tokens(centers: np.ndarray, features: np.ndarray) -> TokenFeatures:
    return TokenFeatures(
        features=Tensor(features),
        centers=centers,
        center_indices=list(range(len(centers))),
    )


def propagation_oracle(centers, features, points):
    out = np.zeros((len(points), features.shape[1]))
    k = min(3, len(centers))
    for i, p in enumerate(points):
        d2 = np.sum((centers - p) ** 2, axis=1)
        nearest = np.lexsort((np.arange(len(d2)), d2))[:k]
        w = 1.0 / (d2[nearest] + 1e-8)
        out[i] = (w[:, None] * features[nearest]).sum(axis=0) / w.sum()
    return out


class TestPropagateFeatures:
    """Test propagate_features."""

    def test_shared_feature_is_reproduced(self):
        """Test that equal token features propagate unchanged."""
        rng = np.random.default_rng(0)
        f = rng.normal(size=5)
        tokens = make_tokens(rng.normal(size=(6, 3)), np.tile(f, (6, 1)))
        dense = propagate_features(tokens, rng.normal(size=(40, 3)))
        assert np.allclose(dense.features.values, f, atol=1e-12)

    def test_coincident_point_takes_token_feature_exactly(self):
        """Test the coincidence rule is exact."""
        rng = np.random.default_rng(1)
        centers, features = rng.normal(size=(6, 3)), rng.normal(size=(6, 4))
        dense = propagate_features(make_tokens(centers, features), centers[[2, 4]])
        assert np.array_equal(dense.features.values, features[[2, 4]])

    def test_matches_direct_formula(self):
        """Test a random instance against the direct formula."""
        rng = np.random.default_rng(2)
        centers, features = rng.normal(size=(10, 3)), rng.normal(size=(10, 4))
        points = rng.normal(size=(50, 3))
        dense = propagate_features(make_tokens(centers, features), points)
        assert np.max(np.abs(dense.features.values - propagation_oracle(centers, features, points))) <= 1e-10

    def test_fewer_than_three_tokens(self):
        """Test that one or two tokens still produce valid rows."""
        rng = np.random.default_rng(3)
        centers, features = rng.normal(size=(2, 3)), rng.normal(size=(2, 3))
        points = rng.normal(size=(7, 3))
        dense = propagate_features(make_tokens(centers, features), points)
        assert np.max(np.abs(dense.features.values - propagation_oracle(centers, features, points))) <= 1e-10

    def test_weight_rows_sum_to_one(self):
        """Test that interpolation rows are convex."""
        rng = np.random.default_rng(4)
        weights = interpolation_weights(rng.normal(size=(8, 3)), rng.normal(size=(30, 3)))
        assert np.allclose(weights.sum(axis=1), 1.0, atol=1e-12)
        assert np.all((weights > 0).sum(axis=1) <= 3)
