"""HIGH/LOW predictions with explanations: single candidates, k-candidate
majority voting, and a strict-evaluator second pass."""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, replace
from typing import Sequence

from .dataset import FounderRecord, render_profile_prompt_block
from .errors import PredictionFailed, UnparsablePrediction
from .labels import RuleOutcome
from .llm import Backend
from .memory import chat_with_memory
from .policy import DecisionPolicy

logger = logging.getLogger(__name__)

PREDICTION_SYSTEM = (
    "Predict the likelihood of success (HIGH or LOW) based on the provided founder profile and "
    "decision policy, and provide a brief explanation of your reasoning."
)
RETURN_FORMAT = (
    "Return your prediction in the following format:\n"
    "Prediction: <HIGH or LOW>\n"
    "Explanation: <brief explanation>"
)
REFINE_TEMPLATE = (
    "You are a strict evaluator of startup success predictions.\n"
    "Your task is to review an initial prediction and its reasoning, and then provide a final, "
    "refined prediction that is logically consistent with the data and decision policy.\n"
    "\n"
    "The AI initially predicted: {prediction} with the following reasoning: {reasoning}\n"
    "Double-check if the reasoning follows the decision policy and all provided data.\n"
    "If there are any errors or omissions, correct them.\n"
    "Finally, output the final correct outcome as either 'HIGH' or 'LOW', followed by a brief "
    "explanation of your corrections."
)
COLUMNS = ("founder_id", "actual", "predicted", "refined", "explanation", "candidate_labels")

_MARKUP = "*_`#>"
_PREDICTION_LINE = re.compile(r"^[\s*_`#>-]*prediction[\s*_`]*:(?P<rest>.*)$", re.IGNORECASE | re.MULTILINE)
_LABEL = re.compile(r"\b(HIGH|LOW)\b", re.IGNORECASE)
_STANDALONE = re.compile(r"\b(HIGH|LOW)\b")
_EXPLANATION = re.compile(r"[*_`]*explanation[*_`]*\s*:[*_`]*", re.IGNORECASE)
_LEAD_PUNCT = " \t\n.:,;-\u2013\u2014"


@dataclass(frozen=True)
class Candidate:
    label: RuleOutcome
    explanation: str
    raw_reply: str


@dataclass(frozen=True)
class FinalPrediction:
    founder_id: str
    label: RuleOutcome
    explanation: str
    candidates: tuple[Candidate, ...]
    refined: bool = False


def parse_candidate(reply: str) -> Candidate:
    """Read the ``Prediction:``/``Explanation:`` reply format.

    Without a Prediction line, a reply mentioning exactly one of the
    upper-case tokens HIGH/LOW is accepted with the whole reply as its
    explanation.
    """
    line = _PREDICTION_LINE.search(reply)
    if line:
        label = _LABEL.search(line.group("rest"))
        if label:
            after = line.start("rest") + label.end()
            m_expl = _EXPLANATION.search(reply, after)
            if m_expl:
                explanation = reply[m_expl.end() :]
            else:
                explanation = reply[after:]
            return Candidate(RuleOutcome(label.group(1).upper()), explanation.strip().strip(_MARKUP).strip(), reply)
    tokens = set(_STANDALONE.findall(reply))
    if len(tokens) == 1:
        return Candidate(RuleOutcome(tokens.pop()), reply.strip(), reply)
    raise UnparsablePrediction(f"no HIGH/LOW prediction in {reply[:80]!r}")


def prediction_prompt(record: FounderRecord, policy: DecisionPolicy) -> str:
    return "\n".join(
        [
            render_profile_prompt_block(record),
            "Based on the following decision policy, predict whether the founder is likely to succeed.",
            f"Decision Policy: {policy.combined_text()}",
            RETURN_FORMAT,
        ]
    )


def predict_once(
    record: FounderRecord,
    policy: DecisionPolicy,
    backend: Backend,
    memory=None,
    temperature: float = 1.0,
    remember: bool = False,
) -> Candidate:
    if policy.version < 1:
        raise ValueError("policy version must be >= 1")
    reply = chat_with_memory(
        backend,
        PREDICTION_SYSTEM,
        prediction_prompt(record, policy),
        memory=memory,
        remember=remember,
        temperature=temperature,
        stage="predict",
    )
    return parse_candidate(reply.text)


def majority_vote(labels: Sequence[RuleOutcome]) -> RuleOutcome:
    """Most frequent label; an exact tie resolves to LOW."""
    if not labels:
        raise ValueError("majority_vote needs at least one label")
    counts = Counter(labels)
    if counts[RuleOutcome.HIGH] > counts[RuleOutcome.LOW]:
        return RuleOutcome.HIGH
    return RuleOutcome.LOW


def predict_ensemble(
    record: FounderRecord,
    policy: DecisionPolicy,
    k: int,
    backend: Backend,
    memory=None,
    temperature: float = 1.0,
) -> FinalPrediction:
    """``k`` independent candidates, majority label, explanation from the
    first candidate carrying that label.

    Candidates read memory but do not write it; only the voted outcome is
    recorded afterwards so candidates stay independent.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    candidates = []
    for _ in range(k):
        try:
            candidates.append(predict_once(record, policy, backend, memory, temperature))
        except UnparsablePrediction as exc:
            logger.warning("founder %s: discarded candidate: %s", record.id, exc)
    if not candidates:
        raise PredictionFailed(f"all {k} candidates unparsable for founder {record.id}")
    label = majority_vote([c.label for c in candidates])
    chosen = next(c for c in candidates if c.label is label)
    if memory is not None:
        with memory.store.lock(memory.conversation_id):
            memory.record(backend, prediction_prompt(record, policy), chosen.raw_reply)
    return FinalPrediction(record.id, label, chosen.explanation, tuple(candidates))


def refinement_prompt(final: FinalPrediction, record: FounderRecord, policy: DecisionPolicy) -> str:
    head = REFINE_TEMPLATE.format(prediction=final.label.value, reasoning=final.explanation)
    return "\n\n".join([head, render_profile_prompt_block(record), f"Decision Policy: {policy.combined_text()}"])


def refine_prediction(
    final: FinalPrediction,
    record: FounderRecord,
    policy: DecisionPolicy,
    backend: Backend,
    memory=None,
    temperature: float = 0.0,
) -> FinalPrediction:
    reply = chat_with_memory(
        backend,
        "",
        refinement_prompt(final, record, policy),
        memory=memory,
        remember=False,
        temperature=temperature,
        stage="refine_prediction",
    )
    m = _STANDALONE.search(reply.text)
    if m is None:
        logger.warning("founder %s: unparsable refinement reply, keeping initial prediction", final.founder_id)
        return final
    explanation = reply.text[m.end() :].lstrip(_LEAD_PUNCT).rstrip() or final.explanation
    return replace(final, label=RuleOutcome(m.group(1)), explanation=explanation, refined=True)


def prediction_row(final: FinalPrediction, actual) -> dict[str, str]:
    return {
        "founder_id": final.founder_id,
        "actual": actual.value,
        "predicted": final.label.value,
        "refined": str(final.refined).lower(),
        "explanation": final.explanation,
        "candidate_labels": ";".join(c.label.value for c in final.candidates),
    }
