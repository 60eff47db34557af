"""Outcome labels shared by every stage."""

from __future__ import annotations

from enum import Enum


class OutcomeLabel(str, Enum):
    """Ground-truth outcome of a founder's startup."""

    SUCCESS = "SUCCESS"
    FAILURE = "FAILURE"


class RuleOutcome(str, Enum):
    """Predicted likelihood of success."""

    HIGH = "HIGH"
    LOW = "LOW"


def expected_outcome(actual: OutcomeLabel) -> RuleOutcome:
    return RuleOutcome.HIGH if actual is OutcomeLabel.SUCCESS else RuleOutcome.LOW
