"""Taxonomy file I/O and the action → affordance rule table."""

import logging
from fnmatch import fnmatchcase
from pathlib import Path
from typing import Dict, List, Optional, Union

from src.common.exceptions import FormatError, MissingReferenceError, TaxonomyError
from src.dataset.fuzzy_matcher import FuzzyMatcher, did_you_mean
from src.dataset.models import MappingResult, Rule, Taxonomy

logger = logging.getLogger(__name__)

SECTIONS = ("affordances", "objects", "rules")


def default_taxonomy_path() -> Path:
    """The shipping taxonomy fixture under src/config."""
    return Path(__file__).parents[1] / "config" / "taxonomy.txt"


def parse_taxonomy(text: str, source: str = "<string>") -> Taxonomy:
    """
    Parse the sectioned taxonomy format.

    Lines starting with '#' and blank lines are ignored.

    Raises:
        FormatError: Content outside a section, unknown section, malformed rule
        TaxonomyError: Duplicate names or rule keys, rules naming unknown types
    """
    names: Dict[str, List[str]] = {"affordances": [], "objects": []}
    rules: List[Rule] = []
    rule_lines: Dict[tuple, int] = {}
    section: Optional[str] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise FormatError(f"{source}:{line_no}: unknown section [{section}]")
            continue
        if section is None:
            raise FormatError(f"{source}:{line_no}: content before the first section header")

        if section in names:
            if len(line.split()) != 1:
                raise FormatError(f"{source}:{line_no}: expected a single name, got {line!r}")
            if line in names[section]:
                raise TaxonomyError(f"{source}:{line_no}: duplicate {section[:-1]} '{line}'")
            names[section].append(line)
            continue

        fields = line.split()
        if len(fields) != 3:
            raise FormatError(
                f"{source}:{line_no}: rule must be 'action_pattern object_class affordance', "
                f"got {len(fields)} fields"
            )
        rule = Rule(action_pattern=fields[0], object_class=fields[1], affordance=fields[2])
        if rule.affordance not in names["affordances"]:
            raise TaxonomyError(
                f"{source}:{line_no}: rule maps to unknown affordance '{rule.affordance}'"
                + did_you_mean(rule.affordance, names["affordances"])
            )
        if not rule.is_generic and rule.object_class not in names["objects"]:
            raise TaxonomyError(
                f"{source}:{line_no}: rule names unknown object class '{rule.object_class}'"
                + did_you_mean(rule.object_class, names["objects"])
            )
        if rule.key in rule_lines:
            raise TaxonomyError(
                f"{source}:{line_no}: duplicate rule key ({rule.action_pattern}, {rule.object_class}), "
                f"first defined on line {rule_lines[rule.key]}"
            )
        rule_lines[rule.key] = line_no
        rules.append(rule)

    if not names["affordances"]:
        raise TaxonomyError(f"{source}: taxonomy declares no affordance types")

    return Taxonomy(
        affordances=tuple(names["affordances"]),
        objects=tuple(names["objects"]),
        rules=tuple(rules),
    )


def format_taxonomy(taxonomy: Taxonomy) -> str:
    """Serialize in canonical section order."""
    lines = ["[affordances]", *taxonomy.affordances, "", "[objects]", *taxonomy.objects, "", "[rules]"]
    lines.extend(f"{r.action_pattern} {r.object_class} {r.affordance}" for r in taxonomy.rules)
    return "\n".join(lines) + "\n"


def load_taxonomy(path: Union[str, Path, None] = None) -> Taxonomy:
    """
    Read a taxonomy file (the packaged default when path is None).

    Raises:
        MissingReferenceError: If the file does not exist
    """
    path = default_taxonomy_path() if path is None else Path(path)
    if not path.is_file():
        raise MissingReferenceError(f"taxonomy file not found: {path}")
    taxonomy = parse_taxonomy(path.read_text(), source=str(path))
    logger.debug(
        f"Loaded taxonomy {path}: {len(taxonomy.affordances)} affordances, "
        f"{len(taxonomy.objects)} objects, {len(taxonomy.rules)} rules"
    )
    return taxonomy


def save_taxonomy(path: Union[str, Path], taxonomy: Taxonomy) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_taxonomy(taxonomy))
    return path


def map_action_to_affordance(action: str, object_class: str, taxonomy: Taxonomy) -> MappingResult:
    """
    Map a caption keyword pair onto an affordance type.

    Rules are fnmatch patterns over the lower-cased action. Rules for the
    exact object class are consulted first, in file order; object-agnostic
    ('*') rules only apply when none of them match. An unmatched pair is
    returned unmapped, with the closest rule pattern as a review hint.

    Examples:
        ("opening", "bottle") with rule "open* bottle open" → affordance "open"
        ("juggling", "bottle") with no matching rule → unmapped
    """
    keyword = action.strip().lower()
    specific = [r for r in taxonomy.rules if r.object_class == object_class]
    generic = [r for r in taxonomy.rules if r.is_generic]

    for rule in specific + generic:
        if fnmatchcase(keyword, rule.action_pattern.lower()):
            return MappingResult(
                action=action, object_class=object_class, affordance=rule.affordance, rule=rule
            )

    suggestion = FuzzyMatcher().suggest(keyword, [r.action_pattern for r in specific + generic])
    logger.warning(f"Unmapped action '{action}' on '{object_class}' queued for manual review")
    return MappingResult(action=action, object_class=object_class, suggestion=suggestion)


def map_actions(pairs: List[tuple], taxonomy: Taxonomy) -> List[MappingResult]:
    """Map many (action, object_class) pairs, preserving order."""
    return [map_action_to_affordance(action, obj, taxonomy) for action, obj in pairs]


def parse_action_pairs(text: str, source: str = "<string>") -> List[tuple]:
    """
    Parse "action object_class" lines ('#' comments and blanks ignored).

    Raises:
        FormatError: A line without exactly two fields
    """
    pairs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise FormatError(f"{source}:{line_no}: expected 'action object_class', got {line!r}")
        pairs.append((fields[0], fields[1]))
    return pairs
