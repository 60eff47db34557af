"""Simulated-RL scoring: a judged base score shifted by a fixed reward or
penalty for the prediction's confusion case, clamped to [0, 1]."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from statistics import fmean
from typing import Sequence

from .errors import DomainError, EmptyInput, UnparsableScore
from .labels import OutcomeLabel, RuleOutcome
from .llm import Backend
from .memory import chat_with_memory

SCORING_PROMPT = (
    "Score the following reasoning trace for predictive precision on a scale from 0 to 1, "
    "where 1 means perfect precision with no false positives. Reply with the number only."
)
SAMPLE_COUNT = 10
EXCERPT_CHARS = 200
COLUMNS = ("founder_id", "base", "case", "adjustment", "final")

_NUMBER = re.compile(r"[-+]?(?:\d+(?:\.\d+)?|\.\d+)")


class Case(str, Enum):
    TP = "TP"
    FP = "FP"
    FN = "FN"
    TN = "TN"


@dataclass(frozen=True)
class RewardTable:
    tp: float = 0.2
    fp: float = -0.2
    fn: float = -0.1
    tn: float = 0.05

    def for_case(self, case: Case) -> float:
        return {Case.TP: self.tp, Case.FP: self.fp, Case.FN: self.fn, Case.TN: self.tn}[case]


@dataclass(frozen=True)
class RlScore:
    founder_id: str
    base: float
    adjustment: float
    final: float
    case: Case

    def to_row(self) -> dict[str, str]:
        return {
            "founder_id": self.founder_id,
            "base": repr(self.base),
            "case": self.case.value,
            "adjustment": repr(self.adjustment),
            "final": repr(self.final),
        }

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "RlScore":
        return cls(row["founder_id"], float(row["base"]), float(row["adjustment"]), float(row["final"]), Case(row["case"]))


@dataclass(frozen=True)
class SamplePrediction:
    founder_id: str
    predicted: RuleOutcome
    actual: OutcomeLabel
    excerpt: str


@dataclass(frozen=True)
class PerformanceSummary:
    average_rl_score: float
    accuracy: float
    sample_predictions: tuple[SamplePrediction, ...] = ()


def classify(actual: OutcomeLabel, predicted: RuleOutcome) -> Case:
    if predicted is RuleOutcome.HIGH:
        return Case.TP if actual is OutcomeLabel.SUCCESS else Case.FP
    return Case.FN if actual is OutcomeLabel.SUCCESS else Case.TN


def clamp(x: float, lo: float = 0.0, hi: float = 1.0) -> float:
    return min(hi, max(lo, x))


def adjust_score(
    base: float,
    actual: OutcomeLabel,
    predicted: RuleOutcome,
    rewards: RewardTable = RewardTable(),
    founder_id: str = "",
) -> RlScore:
    if not 0.0 <= base <= 1.0:
        raise DomainError(f"base score {base} outside [0, 1]")
    case = classify(actual, predicted)
    adjustment = rewards.for_case(case)
    return RlScore(founder_id, base, adjustment, clamp(base + adjustment), case)


def parse_score(reply: str) -> float:
    """First number in [0, 1] appearing in ``reply``."""
    for m in _NUMBER.finditer(reply):
        value = float(m.group(0))
        if 0.0 <= value <= 1.0 and not m.group(0).startswith("-"):
            return value
    raise UnparsableScore(f"no score in [0, 1] found in {reply[:80]!r}")


def scoring_prompt(reasoning: str) -> str:
    return f"{SCORING_PROMPT}\n\nReasoning trace:\n{reasoning}"


def judge_base_score(reasoning: str, backend: Backend, memory=None) -> float:
    if not reasoning.strip():
        raise ValueError("cannot score empty reasoning")
    reply = chat_with_memory(
        backend, "", scoring_prompt(reasoning), memory=memory, remember=False, temperature=0.0, stage="score"
    )
    return parse_score(reply.text)


def summarize_scores(
    scores: Sequence[RlScore],
    predictions: dict[str, tuple[RuleOutcome, str]],
    actuals: dict[str, OutcomeLabel],
    sample_count: int = SAMPLE_COUNT,
) -> PerformanceSummary:
    """Mean final score, accuracy, and the first ``sample_count`` predictions
    by founder id. ``predictions`` maps id -> (label, explanation)."""
    if not scores:
        raise EmptyInput("no scores to summarise")
    ids = [s.founder_id for s in scores]
    missing = [i for i in ids if i not in predictions or i not in actuals]
    if missing:
        raise ValueError(f"scores without aligned prediction/actual: {missing[:5]}")
    correct = sum(
        1 for i in ids if (predictions[i][0] is RuleOutcome.HIGH) == (actuals[i] is OutcomeLabel.SUCCESS)
    )
    samples = tuple(
        SamplePrediction(i, predictions[i][0], actuals[i], predictions[i][1][:EXCERPT_CHARS])
        for i in sorted(ids)[:sample_count]
    )
    return PerformanceSummary(fmean(s.final for s in scores), correct / len(ids), samples)
