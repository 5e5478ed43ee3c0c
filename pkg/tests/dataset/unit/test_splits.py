"""Unit tests for seen/unseen split assignment."""

import pytest

from src.common.exceptions import ConfigurationError, TaxonomyError
from src.dataset import SplitSpec, make_splits


@pytest.fixture
def pool(make_entry):
    """40 entries over 3 objects × 2 affordances, unevenly sized groups."""
    entries = []
    for i in range(40):
        obj = ("mug", "bottle", "kettle")[i % 3]
        affordance = ("grasp", "open")[i % 2]
        entries.append(make_entry(f"v{i}", f"c{i}.pc", affordance=affordance, object_class=obj))
    return entries


class TestSeenSplit:
    """Test stratified seen-mode splits."""

    def test_test_pairs_occur_in_train(self, pool):
        """Test that every test (object, affordance) pair also occurs in train."""
        result = make_splits(pool, SplitSpec(mode="seen", seed=3, test_fraction=0.2))
        train_pairs = {e.pair for e in result if e.split == "train"}
        test_pairs = {e.pair for e in result if e.split == "test"}
        assert test_pairs
        assert test_pairs <= train_pairs

    def test_group_fraction(self, make_entry):
        """Test ceil(fraction·n) test entries for a single group of 10."""
        entries = [make_entry(f"v{i}", f"c{i}.pc") for i in range(10)]
        result = make_splits(entries, SplitSpec(test_fraction=0.2))
        assert sum(e.split == "test" for e in result) == 2

    def test_singleton_group_stays_in_train(self, make_entry):
        result = make_splits([make_entry("v", "c.pc")], SplitSpec(test_fraction=0.5))
        assert result[0].split == "train"

    def test_deterministic(self, pool):
        """Test that the same spec and seed give identical assignments."""
        spec = SplitSpec(seed=11)
        assert make_splits(pool, spec) == make_splits(pool, spec)

    def test_seed_changes_assignment(self, pool):
        a = [e.split for e in make_splits(pool, SplitSpec(seed=1))]
        b = [e.split for e in make_splits(pool, SplitSpec(seed=2))]
        assert a != b

    def test_order_preserved(self, pool):
        result = make_splits(pool, SplitSpec())
        assert [e.video_id for e in result] == [e.video_id for e in pool]


class TestUnseenSplit:
    """Test hold-out splits."""

    def test_held_out_object(self, pool):
        """Test that every 'mug' entry is test and no train entry is a mug."""
        result = make_splits(pool, SplitSpec(mode="unseen", holdout_objects=["mug"]))
        assert all(e.split == "test" for e in result if e.object_class == "mug")
        assert all(e.object_class != "mug" for e in result if e.split == "train")

    def test_held_out_affordance(self, pool):
        result = make_splits(pool, SplitSpec(mode="unseen", holdout_affordances=["open"]))
        assert {e.affordance_type for e in result if e.split == "test"} == {"open"}
        assert {e.affordance_type for e in result if e.split == "train"} == {"grasp"}

    def test_empty_holdout(self, pool):
        with pytest.raises(ConfigurationError):
            make_splits(pool, SplitSpec(mode="unseen"))

    def test_holdout_covering_everything(self, pool):
        """Test that holding out every class is a configuration error."""
        spec = SplitSpec(mode="unseen", holdout_objects=["mug", "bottle", "kettle"])
        with pytest.raises(ConfigurationError):
            make_splits(pool, spec)

    def test_holdout_outside_taxonomy(self, pool, taxonomy):
        with pytest.raises(TaxonomyError, match="did you mean 'mug'"):
            make_splits(pool, SplitSpec(mode="unseen", holdout_objects=["mugg"]), taxonomy)
