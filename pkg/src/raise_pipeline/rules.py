"""Rule language: ``IF <cond> AND <cond> THEN likelihood_of_success = HIGH|LOW``.

Branches are OR-joined full IF clauses; conditions inside a branch are
AND-joined opaque strings. The parser tolerates the markup LLMs wrap around
rules (bold markers, quotes, escaped underscores, lead-in prose).

Keyword case: when the rule opens with an upper-case ``IF`` the text is
treated as written in the DSL's own convention and only upper-case
``AND``/``OR`` split clauses, so prose such as "communication and investor
relations" stays intact. A lower-case ``if`` switches to case-insensitive
keywords.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ConflictingOutcomes, EmptyConditions, MissingIf, MissingOutcome, MissingThen, RuleParseError
from .labels import OutcomeLabel, RuleOutcome, expected_outcome
from .llm import Backend
from .memory import Conversation, chat_with_memory

PLACEHOLDER_CONDITION = "see reasoning log"

EXTRACTION_SYSTEM = (
    "Convert the reasoning log into a single concise logical rule about the founder, "
    "and founder only, using the specified format."
)
EXTRACTION_PROMPT = (
    "Convert the following reasoning log into a structured logical rule explaining why the "
    "founder SUCCEEDED or FAILED using the format:\n"
    "IF <conditions> THEN likelihood_of_success = <result>.\n"
    "\n"
    "Example:\n"
    "IF founder has a top-tier university background AND previous experience at a successful "
    "startup AND startup idea targets a rapidly growing industry THEN likelihood_of_success = HIGH.\n"
    "OR\n"
    "IF founder has no documented professional experience AND no previous entrepreneurial ventures "
    "AND lacks relevant industry knowledge THEN likelihood_of_success = LOW.\n"
    "\n"
    "Reasoning log:\n"
)

_CONDITION_STRIP = " \t,;:-\u2013\u2014"
_LIKELIHOOD = r"likelihood[\s_]*of[\s_]*success"
_THEN_CLAUSE = re.compile(rf"\bTHEN\b\s*{_LIKELIHOOD}\b", re.IGNORECASE)
_OUTCOME_VALUE = re.compile(r"\s*(?:=|:|\bis\b)?\s*[\"'`]?([A-Za-z]+)")
_ANY_THEN = re.compile(r"\bTHEN\b", re.IGNORECASE)
_QUOTES = "\"'“”‘’`"


@dataclass(frozen=True)
class ConditionBranch:
    conditions: tuple[str, ...]


@dataclass(frozen=True)
class Rule:
    branches: tuple[ConditionBranch, ...]
    outcome: RuleOutcome
    raw_text: str = ""
    via_fallback: bool = False
    founder_id: str = ""

    def structure(self) -> tuple:
        return (tuple(b.conditions for b in self.branches), self.outcome)

    def bind(self, founder_id: str) -> "Rule":
        return Rule(self.branches, self.outcome, self.raw_text, self.via_fallback, founder_id)


def clean_rule_text(text: str) -> str:
    """Strip markup and collapse whitespace; character positions in error
    spans refer to this cleaned text."""
    s = text.replace("\\_", "_").replace("**", "").replace("__", "_")
    s = s.replace("*", "")
    s = " ".join(s.split())
    s = s.strip(_QUOTES + " ")
    return s


def _protected_spans(text: str) -> list[tuple[int, int]]:
    """Spans covered by *matched* parentheses; stray brackets protect nothing."""
    stack: list[int] = []
    spans = []
    for i, ch in enumerate(text):
        if ch == "(":
            stack.append(i)
        elif ch == ")" and stack:
            start = stack.pop()
            if not stack:
                spans.append((start, i + 1))
    return spans


def _top_level(matches, spans):
    return [m for m in matches if not any(a <= m.start() < b for a, b in spans)]


def _keyword(word: str, strict_case: bool) -> re.Pattern:
    return re.compile(rf"\b{word}\b", 0 if strict_case else re.IGNORECASE)


def split_conditions(text: str, strict_case: bool = True) -> list[str]:
    """Split on top-level AND; parenthesised ANDs are left alone."""
    spans = _protected_spans(text)
    cuts = _top_level(_keyword("AND", strict_case).finditer(text), spans)
    pieces, pos = [], 0
    for m in cuts:
        pieces.append(text[pos : m.start()])
        pos = m.end()
    pieces.append(text[pos:])
    return [p.strip(_CONDITION_STRIP) for p in pieces]


def _find_if(text: str) -> re.Match | None:
    return re.search(r"\bIF\b", text) or re.search(r"\bif\b", text, re.IGNORECASE)


def _parse_outcome_after(text: str, pos: int, offset: int, original: str) -> tuple[RuleOutcome, int]:
    m = _OUTCOME_VALUE.match(text, pos)
    if not m or m.group(1).upper() not in ("HIGH", "LOW"):
        raise MissingOutcome("no HIGH/LOW outcome after THEN clause", (offset + pos, offset + len(text)), original)
    return RuleOutcome(m.group(1).upper()), m.end()


def parse_rule(text: str) -> Rule:
    """Parse rule text into its branch/condition structure (no founder bound)."""
    cleaned = clean_rule_text(text)
    m_if = _find_if(cleaned)
    if m_if is None:
        raise MissingIf("no IF keyword", (0, len(cleaned)), cleaned)
    strict = m_if.group(0) == "IF"
    body_start = m_if.end()
    body = cleaned[body_start:]

    spans = _protected_spans(body)
    or_if = re.compile(r"\bOR\s+IF\b", 0 if strict else re.IGNORECASE)
    cuts = _top_level(or_if.finditer(body), spans)
    segments, pos = [], 0
    for m in cuts:
        segments.append((pos, body[pos : m.start()]))
        pos = m.end()
    segments.append((pos, body[pos:]))

    branches: list[ConditionBranch] = []
    outcomes: list[RuleOutcome] = []
    for idx, (seg_start, segment) in enumerate(segments):
        offset = body_start + seg_start
        last = idx == len(segments) - 1
        m_then = _THEN_CLAUSE.search(segment)
        if m_then is None:
            if _ANY_THEN.search(segment):
                t = _ANY_THEN.search(segment)
                raise MissingOutcome("THEN without likelihood_of_success", (offset + t.start(), offset + len(segment)), cleaned)
            if last:
                raise MissingThen("no THEN clause", (offset, offset + len(segment)), cleaned)
            cond_text = segment
        else:
            cond_text = segment[: m_then.start()]
            outcome, _ = _parse_outcome_after(segment, m_then.end(), offset, cleaned)
            outcomes.append(outcome)
        conditions = split_conditions(cond_text, strict)
        if not cond_text.strip() or any(not c for c in conditions):
            raise EmptyConditions("empty condition", (offset, offset + len(cond_text)), cleaned)
        branches.append(ConditionBranch(tuple(conditions)))

    if len(set(outcomes)) > 1:
        raise ConflictingOutcomes("branches disagree on outcome", (body_start, len(cleaned)), cleaned)
    return Rule(tuple(branches), outcomes[0], raw_text=text)


def render_rule(rule: Rule) -> str:
    return " OR ".join(
        f"IF {' AND '.join(b.conditions)} THEN likelihood_of_success = {rule.outcome.value}"
        for b in rule.branches
    )


def fallback_extract(text: str, actual: OutcomeLabel) -> Rule:
    """Salvage conditions from malformed text; the outcome always follows
    ground truth."""
    cleaned = clean_rule_text(text)
    conditions: list[str] = []
    m_if = _find_if(cleaned)
    if m_if is not None:
        rest = cleaned[m_if.end() :]
        m_then = _ANY_THEN.search(rest)
        span = rest[: m_then.start()] if m_then else ""
        conditions = [c for c in split_conditions(span, m_if.group(0) == "IF") if c]
    if not conditions:
        conditions = [PLACEHOLDER_CONDITION]
    return Rule((ConditionBranch(tuple(conditions)),), expected_outcome(actual), raw_text=text, via_fallback=True)


def resolve_rule(reply: str, actual: OutcomeLabel) -> Rule:
    """Parse a reply, falling back when it is malformed or disagrees with
    the actual outcome."""
    try:
        rule = parse_rule(reply)
    except RuleParseError:
        return fallback_extract(reply, actual)
    if rule.outcome is not expected_outcome(actual):
        return fallback_extract(reply, actual)
    return rule


def extraction_prompt(log_text: str) -> str:
    return EXTRACTION_PROMPT + log_text


def extract_rule(log, backend: Backend, memory: Conversation | None = None, temperature: float = 0.0) -> Rule:
    """Ask the backend to distil a reasoning log into a rule bound to its founder."""
    if not log.text.strip():
        raise ValueError(f"empty reasoning log for founder {log.founder_id}")
    reply = chat_with_memory(
        backend,
        EXTRACTION_SYSTEM,
        extraction_prompt(log.text),
        memory=memory,
        temperature=temperature,
        stage="extract_rules",
    )
    return resolve_rule(reply.text, log.outcome).bind(log.founder_id)
