"""Decision policies: compiled from extracted rules, refined with scoring
feedback, and round-tripped through JSON for expert edits."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

from .labels import RuleOutcome
from .llm import Backend
from .memory import chat_with_memory
from .rules import Rule, render_rule
from .scoring import PerformanceSummary

logger = logging.getLogger(__name__)

NO_SUCCESS_RULES = "NO SUCCESS RULES AVAILABLE"
NO_FAILURE_RULES = "NO FAILURE RULES AVAILABLE"
MAX_SUMMARY_RULES = 200

COMPILE_PROMPT = (
    "Analyse the following extracted rules from {group} founder profiles and compile a concise "
    "decision policy that clearly summarises the key conditions which predict startup {outcome}.\n"
    "Rules:\n{rules}\n"
    "Your output should be in the following format:\n"
    "IF <conditions> THEN likelihood_of_success = {label}."
)
REFINE_SYSTEM = "You are an expert evaluator of startup success decision policies."
REFINE_INSTRUCTIONS = (
    "Refine the following decision policy for predicting startup {category} outcomes, improving "
    "detail, with a strong focus on precision (minimise false positives).\n"
    "Integrate all key signals from the extracted rules below without contradicting the data.\n"
    "Incorporate insights from our RL-based scoring mechanism: ensure that the refined policy "
    "emphasises the importance of high-quality reasoning that earns high RL scores by rewarding "
    "true positives and penalising false positives.\n"
    "Use this scoring feedback to enhance the robustness and interpretability of the final "
    "decision policy."
)

Clock = Callable[[], str]


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class LineageEntry:
    version: int
    trigger: str
    timestamp: str


@dataclass(frozen=True)
class DecisionPolicy:
    success_text: str
    failure_text: str
    version: int = 1
    lineage: tuple[LineageEntry, ...] = field(default=())

    def combined_text(self) -> str:
        return f"Success Decision Policy:\n{self.success_text}\n\nFailure Decision Policy:\n{self.failure_text}"

    def next_version(self, success_text: str, failure_text: str, trigger: str, clock: Clock = utc_now) -> "DecisionPolicy":
        version = self.version + 1
        return DecisionPolicy(
            success_text, failure_text, version, self.lineage + (LineageEntry(version, trigger, clock()),)
        )

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "success_text": self.success_text,
            "failure_text": self.failure_text,
            "lineage": [
                {"version": e.version, "trigger": e.trigger, "timestamp": e.timestamp} for e in self.lineage
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DecisionPolicy":
        lineage = tuple(LineageEntry(e["version"], e["trigger"], e["timestamp"]) for e in data.get("lineage", []))
        policy = cls(data["success_text"], data["failure_text"], int(data["version"]), lineage)
        if len(policy.lineage) != policy.version:
            raise ValueError(f"policy v{policy.version} has {len(policy.lineage)} lineage entries")
        return policy


def policy_filename(version: int) -> str:
    return f"policy_v{version}.json"


def save_policy(policy: DecisionPolicy, directory: str | Path) -> Path:
    path = Path(directory) / policy_filename(policy.version)
    path.write_text(json.dumps(policy.to_dict(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def load_policy(path: str | Path) -> DecisionPolicy:
    return DecisionPolicy.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def latest_policy(directory: str | Path) -> DecisionPolicy | None:
    paths = sorted(Path(directory).glob("policy_v*.json"), key=lambda p: int(p.stem.split("_v")[1]))
    return load_policy(paths[-1]) if paths else None


def _rules_block(rules: Sequence[Rule]) -> str:
    return "\n".join(f"- {render_rule(r)}" for r in rules)


def compile_prompt(rules: Sequence[Rule], outcome: RuleOutcome) -> str:
    if outcome is RuleOutcome.HIGH:
        return COMPILE_PROMPT.format(group="successful", outcome="success", rules=_rules_block(rules), label="HIGH")
    return COMPILE_PROMPT.format(group="unsuccessful", outcome="failure", rules=_rules_block(rules), label="LOW")


def compile_policy(
    rules: Sequence[Rule],
    backend: Backend,
    memory=None,
    temperature: float = 1.0,
    clock: Clock = utc_now,
) -> DecisionPolicy:
    """One backend call per non-empty outcome group; an empty group gets a
    sentinel text instead."""
    texts = {}
    for outcome, sentinel in ((RuleOutcome.HIGH, NO_SUCCESS_RULES), (RuleOutcome.LOW, NO_FAILURE_RULES)):
        group = [r for r in rules if r.outcome is outcome]
        if not group:
            texts[outcome] = sentinel
            continue
        reply = chat_with_memory(
            backend, "", compile_prompt(group, outcome), memory=memory, temperature=temperature, stage="compile_policy"
        )
        texts[outcome] = reply.text
    return DecisionPolicy(texts[RuleOutcome.HIGH], texts[RuleOutcome.LOW], 1, (LineageEntry(1, "compiled", clock()),))


def rules_summary(rules: Sequence[Rule], limit: int = MAX_SUMMARY_RULES) -> list[str]:
    """Canonical rule texts, ordered by founder id, exact duplicates dropped."""
    seen: set[str] = set()
    out = []
    for rule in sorted(rules, key=lambda r: r.founder_id):
        text = render_rule(rule)
        if text in seen:
            continue
        seen.add(text)
        out.append(text)
        if len(out) == limit:
            break
    return out


def performance_block(perf: PerformanceSummary) -> str:
    lines = [
        f"Average RL score: {perf.average_rl_score:.3f}",
        f"Accuracy: {perf.accuracy:.3f}",
        "Sample predictions:",
    ]
    lines += [
        f"- founder {s.founder_id}: predicted {s.predicted.value}, actual {s.actual.value}; {s.excerpt}"
        for s in perf.sample_predictions
    ]
    return "\n".join(lines)


def refine_prompt(category: str, current_text: str, rules: Sequence[Rule], perf: PerformanceSummary) -> str:
    summary = rules_summary(rules)
    return "\n\n".join(
        [
            REFINE_INSTRUCTIONS.format(category=category),
            f"Current decision policy:\n{current_text}",
            "Extracted rules:\n" + ("\n".join(f"- {t}" for t in summary) or "(none)"),
            f"Test performance:\n{performance_block(perf)}",
        ]
    )


def refine_policy(
    policy: DecisionPolicy,
    rules: Sequence[Rule],
    perf: PerformanceSummary,
    backend: Backend,
    memory=None,
    temperature: float = 1.0,
    clock: Clock = utc_now,
) -> DecisionPolicy:
    """Refine both policy halves; if either reply is empty the policy is
    returned unchanged."""
    replies = {}
    for category, outcome, current in (
        ("success", RuleOutcome.HIGH, policy.success_text),
        ("failure", RuleOutcome.LOW, policy.failure_text),
    ):
        group = [r for r in rules if r.outcome is outcome]
        reply = chat_with_memory(
            backend,
            REFINE_SYSTEM,
            refine_prompt(category, current, group, perf),
            memory=memory,
            temperature=temperature,
            stage="refine_policy",
        )
        if not reply.text.strip():
            logger.warning("empty %s refinement reply; keeping policy v%d", category, policy.version)
            return policy
        replies[category] = reply.text
    return policy.next_version(replies["success"], replies["failure"], "rl_feedback", clock)


def import_expert_edit(policy: DecisionPolicy, edited: dict, clock: Clock = utc_now) -> DecisionPolicy:
    """Apply an expert-edited export (``success_text``/``failure_text``) as a new version."""
    return policy.next_version(
        edited.get("success_text", policy.success_text),
        edited.get("failure_text", policy.failure_text),
        "expert_edit",
        clock,
    )
