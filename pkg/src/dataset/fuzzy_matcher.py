"""
Fuzzy suggestions for the manual-review channel.

Proposes the closest taxonomy name or rule pattern for a string that
failed to match. Suggestions are review aids only; they never change a
mapping or silence an error.
"""

import logging
from typing import Iterable, Optional, Tuple

from rapidfuzz import fuzz

logger = logging.getLogger(__name__)

WILDCARDS = "*?[]"


def _normalize(text: str) -> str:
    """Lower-case, trim, and drop fnmatch wildcard characters."""
    cleaned = text.strip().lower()
    for ch in WILDCARDS:
        cleaned = cleaned.replace(ch, "")
    return cleaned


class FuzzyMatcher:
    """
    Similarity ranking over candidate strings.

    Uses rapidfuzz's normalized Levenshtein ratio; wildcard characters in
    candidates (rule patterns such as "open*") are ignored when scoring.
    """

    def __init__(self, threshold: float = 0.6):
        """
        Args:
            threshold: Minimum similarity (0.0-1.0) for a suggestion
        """
        if not 0.0 <= threshold <= 1.0:
            raise ValueError(f"Threshold must be between 0.0 and 1.0, got {threshold}")
        self.threshold = threshold

    def similarity(self, query: str, candidate: str) -> float:
        """Similarity in [0, 1]; 0 if either side is empty after normalization."""
        left, right = _normalize(query), _normalize(candidate)
        if not left or not right:
            return 0.0
        if left == right:
            return 1.0
        return fuzz.ratio(left, right) / 100.0

    def find_best_match(
        self, query: str, candidates: Iterable[str], threshold: Optional[float] = None
    ) -> Tuple[Optional[str], float]:
        """
        Best-scoring candidate, first one winning ties.

        Returns:
            (candidate or None if below threshold, score)

        Examples:
            >>> FuzzyMatcher().find_best_match("grap", ["grasp", "open"])
            ('grasp', 0.89)
        """
        match_threshold = self.threshold if threshold is None else threshold
        best, best_score = None, 0.0
        for candidate in candidates:
            score = self.similarity(query, candidate)
            if score > best_score:
                best, best_score = candidate, score
        if best is None or best_score < match_threshold:
            return (None, best_score)
        logger.debug(f"Suggestion for '{query}': '{best}' ({best_score:.2f})")
        return (best, best_score)

    def suggest(self, query: str, candidates: Iterable[str]) -> Optional[str]:
        """The best candidate above threshold, or None."""
        return self.find_best_match(query, candidates)[0]


def did_you_mean(query: str, candidates: Iterable[str]) -> str:
    """A "; did you mean 'x'?" suffix for error messages, or an empty string."""
    suggestion = FuzzyMatcher().suggest(query, candidates)
    return f"; did you mean '{suggestion}'?" if suggestion else ""
