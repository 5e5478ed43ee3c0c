"""Shared fixtures for dataset tests."""

import numpy as np
import pytest

from src.dataset import ManifestEntry, parse_taxonomy, save_manifest, save_taxonomy
from src.geometry import PointCloud, save_cloud

TAXONOMY_TEXT = """\
[affordances]
grasp
open
pour

[objects]
mug
bottle
kettle

[rules]
grasp* * grasp
open* * open
open* bottle open
unscrew* bottle open
pour* * pour
"""


@pytest.fixture
def taxonomy():
    return parse_taxonomy(TAXONOMY_TEXT)


def entry(video_id, cloud, affordance="grasp", object_class="mug", split="train", source="synth:1"):
    return ManifestEntry(
        video_id=video_id,
        embedding_source=source,
        object_class=object_class,
        affordance_type=affordance,
        point_cloud_path=cloud,
        split=split,
    )


@pytest.fixture
def make_entry():
    """Factory for manifest entries."""
    return entry


@pytest.fixture
def valid_test_entries():
    """A one-to-one test split over two affordance types plus a one-to-many train part."""
    return [
        entry("v1", "c1.pc", split="train"),
        entry("v1", "c2.pc", split="train"),
        entry("v1", "c3.pc", split="train"),
        entry("v2", "c4.pc", split="test"),
        entry("v3", "c5.pc", split="test"),
        entry("v4", "c4.pc", affordance="open", object_class="bottle", split="test"),
        entry("v5", "c6.pc", affordance="open", object_class="bottle", split="test"),
    ]


@pytest.fixture
def manifest_dir(tmp_path, taxonomy):
    """A directory with taxonomy, 10 clouds and a valid manifest referencing them."""
    rng = np.random.default_rng(0)
    entries = []
    for i in range(10):
        cloud_path = f"clouds/c{i}.pc"
        save_cloud(tmp_path / cloud_path, PointCloud(coords=rng.normal(size=(8, 3)), labels=np.zeros(8)))
        affordance = ("grasp", "open")[i % 2]
        obj = ("mug", "bottle")[i % 2]
        entries.append(entry(f"v{i}", cloud_path, affordance, obj, ("train", "test")[i >= 7], f"synth:{i}"))
    save_taxonomy(tmp_path / "taxonomy.txt", taxonomy)
    save_manifest(tmp_path / "manifest.tsv", entries, taxonomy_ref="taxonomy.txt")
    return tmp_path
