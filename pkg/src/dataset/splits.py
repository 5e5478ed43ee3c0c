"""Seen / unseen train-test split assignment."""

import logging
import math
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.common.exceptions import ConfigurationError, TaxonomyError
from src.dataset.fuzzy_matcher import did_you_mean
from src.dataset.models import ManifestEntry, SplitSpec, Taxonomy

logger = logging.getLogger(__name__)


def _seen_split(entries: List[ManifestEntry], spec: SplitSpec) -> List[str]:
    """Stratified per (object, affordance) group; each group keeps ≥ 1 train entry."""
    groups: Dict[Tuple[str, str], List[int]] = defaultdict(list)
    for position, entry in enumerate(entries):
        groups[entry.pair].append(position)

    rng = np.random.default_rng(spec.seed)
    assignment = ["train"] * len(entries)
    for pair in sorted(groups):
        members = groups[pair]
        n_test = min(math.ceil(round(spec.test_fraction * len(members), 9)), len(members) - 1)
        order = rng.permutation(len(members))
        for j in order[:n_test]:
            assignment[members[j]] = "test"
    return assignment


def _unseen_split(
    entries: List[ManifestEntry], spec: SplitSpec, taxonomy: Optional[Taxonomy]
) -> List[str]:
    held_objects = set(spec.holdout_objects)
    held_affordances = set(spec.holdout_affordances)
    if not held_objects and not held_affordances:
        raise ConfigurationError("unseen split needs at least one held-out object class or affordance type")
    if taxonomy is not None:
        for name in sorted(held_objects):
            if not taxonomy.has_object(name):
                raise TaxonomyError(
                    f"held-out object class '{name}' is not in the taxonomy"
                    + did_you_mean(name, taxonomy.objects)
                )
        for name in sorted(held_affordances):
            if not taxonomy.has_affordance(name):
                raise TaxonomyError(
                    f"held-out affordance type '{name}' is not in the taxonomy"
                    + did_you_mean(name, taxonomy.affordances)
                )

    assignment = [
        "test" if e.object_class in held_objects or e.affordance_type in held_affordances else "train"
        for e in entries
    ]
    if entries and "train" not in assignment:
        raise ConfigurationError("hold-out covers every entry; the train split would be empty")
    if entries and "test" not in assignment:
        logger.warning("Hold-out matches no entries; the test split is empty")
    return assignment


def make_splits(
    entries: List[ManifestEntry],
    spec: SplitSpec,
    taxonomy: Optional[Taxonomy] = None,
) -> List[ManifestEntry]:
    """
    Assign train/test splits.

    Seen mode: within each (object, affordance) pair, a seeded permutation
    sends ceil(test_fraction·n) entries (at most n−1) to test, so every test
    pair also occurs in train. Unseen mode: entries of held-out object classes
    or affordance types go to test, the rest to train.

    Args:
        entries: Entries (existing split values are ignored)
        spec: Split specification
        taxonomy: If given, held-out names are checked against it

    Returns:
        New entries in input order with split assigned

    Raises:
        ConfigurationError: Unseen mode with no hold-out, or a hold-out covering everything
        TaxonomyError: Held-out name outside the taxonomy
    """
    if spec.mode == "seen":
        assignment = _seen_split(entries, spec)
    else:
        assignment = _unseen_split(entries, spec, taxonomy)

    result = [entry.with_split(split) for entry, split in zip(entries, assignment)]
    logger.info(
        f"{spec.mode} split (seed={spec.seed}): "
        f"{assignment.count('train')} train, {assignment.count('test')} test"
    )
    return result
