"""Unit tests for the action → affordance rule table."""

import pytest

from src.dataset import (
    FuzzyMatcher,
    load_taxonomy,
    map_action_to_affordance,
    parse_action_pairs,
    parse_taxonomy,
)

RULE_TABLE = """\
[affordances]
grasp
open
pour
push
press
cut
lift
sit
wrap
contain

[objects]
bottle
door
drawer
kettle
knife
button
chair
mug

[rules]
grasp* * grasp
hold* * grasp
open* * open
open* bottle open
unscrew* bottle open
twist* bottle open
pull* drawer open
pull* door push
pour* * pour
fill* kettle pour
push* * push
shove* * push
press* * press
click* button press
cut* * cut
slic* knife cut
lift* * lift
sit* chair sit
wrap* * wrap
stor* mug contain
"""

# (action, object) → expected affordance (None = unmapped)
EXPECTED = [
    ("opening", "bottle", "open"),
    ("juggling", "bottle", None),
    ("grasping", "mug", "grasp"),
    ("holding", "knife", "grasp"),
    ("unscrewing", "bottle", "open"),
    ("unscrewing", "kettle", None),
    ("twisting", "bottle", "open"),
    ("pulling", "drawer", "open"),
    ("pulling", "door", "push"),
    ("pulling", "mug", None),
    ("pouring", "kettle", "pour"),
    ("filling", "kettle", "pour"),
    ("filling", "mug", None),
    ("pushing", "door", "push"),
    ("shoving", "chair", "push"),
    ("pressing", "button", "press"),
    ("clicking", "button", "press"),
    ("cutting", "knife", "cut"),
    ("slicing", "knife", "cut"),
    ("slicing", "bottle", None),
    ("lifting", "chair", "lift"),
    ("sitting", "chair", "sit"),
    ("sitting", "mug", None),
    ("wrapping", "bottle", "wrap"),
    ("storing", "mug", "contain"),
    ("OPENING", "door", "open"),
]


@pytest.fixture
def rule_table():
    return parse_taxonomy(RULE_TABLE)


class TestMapActionToAffordance:
    """Test rule lookup semantics."""

    def test_rule_table_has_twenty_rules(self, rule_table):
        assert len(rule_table.rules) == 20

    @pytest.mark.parametrize("action,object_class,expected", EXPECTED)
    def test_fixture_table(self, rule_table, action, object_class, expected):
        """Test every fixture query against the hand-built expected table."""
        assert map_action_to_affordance(action, object_class, rule_table).affordance == expected

    def test_object_rule_shadows_generic(self, rule_table):
        """Test that the bottle-specific rule wins over 'open* *'."""
        result = map_action_to_affordance("opening", "bottle", rule_table)
        assert result.rule.object_class == "bottle"
        generic = map_action_to_affordance("opening", "door", rule_table)
        assert generic.rule.object_class == "*"

    def test_unmapped_is_a_value(self, rule_table):
        """Test that an unmatched pair is returned for review, not raised."""
        result = map_action_to_affordance("juggling", "bottle", rule_table)
        assert not result.mapped
        assert result.rule is None

    def test_unmapped_gets_suggestion(self, rule_table):
        """Test that a near-miss proposes the closest rule pattern."""
        result = map_action_to_affordance("pourring", "mug", rule_table)
        assert result.mapped
        near_miss = map_action_to_affordance("graps", "mug", rule_table)
        assert not near_miss.mapped
        assert near_miss.suggestion == "grasp*"

    def test_shipping_taxonomy_loads(self):
        """Test that the packaged taxonomy parses and maps a known action."""
        taxonomy = load_taxonomy()
        assert "open" in taxonomy.affordances
        assert map_action_to_affordance("opening", "bottle", taxonomy).affordance == "open"


class TestParseActionPairs:
    """Test the review-queue input format."""

    def test_pairs(self):
        assert parse_action_pairs("# queue\nopening bottle\n\njuggling ball\n") == [
            ("opening", "bottle"), ("juggling", "ball"),
        ]

    def test_bad_line(self):
        from src.common.exceptions import FormatError

        with pytest.raises(FormatError, match=":1:"):
            parse_action_pairs("opening\n")


class TestFuzzyMatcher:
    """Test suggestion scoring."""

    def test_wildcards_ignored(self):
        assert FuzzyMatcher().similarity("open", "open*") == 1.0

    def test_below_threshold_returns_none(self):
        best, score = FuzzyMatcher(threshold=0.9).find_best_match("sit", ["grasp", "open"])
        assert best is None
        assert score < 0.9

    def test_invalid_threshold(self):
        with pytest.raises(ValueError):
            FuzzyMatcher(threshold=1.5)
