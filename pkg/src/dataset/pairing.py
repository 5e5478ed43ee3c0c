"""Video ↔ point-cloud pairing rules.

Training pairs may be one-to-many; within each affordance type the test
split must pair video ids and point clouds one-to-one.
"""

import logging
from collections import Counter, defaultdict
from typing import Dict, List, Set

from src.dataset.models import ManifestEntry, PairingReport, PairingViolation

logger = logging.getLogger(__name__)


def validate_pairing(entries: List[ManifestEntry]) -> PairingReport:
    """
    Check the test split for a per-affordance bijection between videos and clouds.

    Violations are reported in a deterministic order (affordance, kind, subject);
    the train split is never flagged.
    """
    test = [e for e in entries if e.split == "test"]
    violations: List[PairingViolation] = []

    by_type: Dict[str, List[ManifestEntry]] = defaultdict(list)
    for entry in test:
        by_type[entry.affordance_type].append(entry)

    for affordance in sorted(by_type):
        group = by_type[affordance]
        clouds_of: Dict[str, Set[str]] = defaultdict(set)
        videos_of: Dict[str, Set[str]] = defaultdict(set)
        for entry in group:
            clouds_of[entry.video_id].add(entry.point_cloud_path)
            videos_of[entry.point_cloud_path].add(entry.video_id)

        for video_id in sorted(clouds_of):
            if len(clouds_of[video_id]) > 1:
                violations.append(PairingViolation(
                    kind="video_to_many_clouds",
                    affordance_type=affordance,
                    subject=video_id,
                    partners=tuple(sorted(clouds_of[video_id])),
                ))
        for cloud in sorted(videos_of):
            if len(videos_of[cloud]) > 1:
                violations.append(PairingViolation(
                    kind="cloud_to_many_videos",
                    affordance_type=affordance,
                    subject=cloud,
                    partners=tuple(sorted(videos_of[cloud])),
                ))

        counts = Counter((e.video_id, e.point_cloud_path) for e in group)
        for (video_id, cloud), count in sorted(counts.items()):
            if count > 1:
                violations.append(PairingViolation(
                    kind="duplicate_test_pair",
                    affordance_type=affordance,
                    subject=f"{video_id} ↔ {cloud}",
                ))

    report = PairingReport(
        violations=violations,
        train_entries=len(entries) - len(test),
        test_entries=len(test),
    )
    if report.valid:
        logger.info(f"Pairing valid: {report.train_entries} train, {report.test_entries} test entries")
    else:
        logger.warning(f"Pairing check found {len(violations)} violation(s)")
    return report
