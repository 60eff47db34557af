"""Confusion matrix and classification metrics (positive class = SUCCESS/HIGH)."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable

from .errors import EmptyInput
from .labels import OutcomeLabel, RuleOutcome


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    fn_: int = 0
    tn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn_, self.tn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn_ + self.tn


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    f_beta: float
    beta: float
    mcc: float
    accuracy: float


def confusion(pairs: Iterable[tuple[RuleOutcome, OutcomeLabel]]) -> ConfusionMatrix:
    tp = fp = fn = tn = 0
    n = 0
    for predicted, actual in pairs:
        n += 1
        if predicted is RuleOutcome.HIGH:
            if actual is OutcomeLabel.SUCCESS:
                tp += 1
            else:
                fp += 1
        elif actual is OutcomeLabel.SUCCESS:
            fn += 1
        else:
            tn += 1
    if n == 0:
        raise EmptyInput("no predictions to evaluate")
    return ConfusionMatrix(tp, fp, fn, tn)


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def compute_metrics(cm: ConfusionMatrix, beta: float = 0.5) -> Metrics:
    """Precision, recall, F1, F-beta, MCC and accuracy; any 0/0 is 0."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if cm.total == 0:
        raise EmptyInput("empty confusion matrix")
    tp, fp, fn, tn = cm.tp, cm.fp, cm.fn_, cm.tn
    p = _ratio(tp, tp + fp)
    r = _ratio(tp, tp + fn)
    f1 = _ratio(2 * p * r, p + r)
    b2 = beta * beta
    f_beta = _ratio((1 + b2) * p * r, b2 * p + r)
    denom = math.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    mcc = _ratio(tp * tn - fp * fn, denom)
    return Metrics(p, r, f1, f_beta, beta, mcc, (tp + tn) / cm.total)


def metrics_report(cm: ConfusionMatrix, m: Metrics) -> dict:
    """The ``metrics.json`` document, values rounded to 3 places."""
    out = {"tp": cm.tp, "fp": cm.fp, "fn": cm.fn_, "tn": cm.tn}
    out.update({k: round(v, 3) for k, v in asdict(m).items() if k != "beta"})
    out["beta"] = m.beta
    order = ["tp", "fp", "fn", "tn", "precision", "recall", "f1", "f_beta", "beta", "mcc", "accuracy"]
    return {k: out[k] for k in order}


def render_table(cm: ConfusionMatrix, m: Metrics, label: str = "Model") -> str:
    rows = [
        ("Precision", m.precision),
        ("Recall", m.recall),
        ("F1 Score", m.f1),
        (f"F{m.beta:g} Score", m.f_beta),
        ("MCC", m.mcc),
        ("Accuracy", m.accuracy),
    ]
    width = max(len(label), 9)
    lines = [f"{'Metric':<10} {label:>{width}}"]
    lines += [f"{name:<10} {value:>{width}.3f}" for name, value in rows]
    lines += [
        "",
        f"{'':<16} {'Predicted':^19}",
        f"{'':<16} {'Failure':>9} {'Success':>9}",
        f"{'Actual Failure':<16} {cm.tn:>9} {cm.fp:>9}",
        f"{'Actual Success':<16} {cm.fn_:>9} {cm.tp:>9}",
    ]
    return "\n".join(lines) + "\n"
