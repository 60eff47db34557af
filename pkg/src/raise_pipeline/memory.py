"""Per-conversation memory compressed by rolling summarisation.

A conversation keeps a summary plus the most recent turns. When the token
estimate passes the threshold, older turns are folded into the summary by
the backend, so context survives across stages without growing unbounded.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass, replace
from pathlib import Path

from .llm import Backend, ChatRequest, ChatResponse, estimate_tokens

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 3000
DEFAULT_KEEP_WINDOW = 4
SUMMARY_PROMPT = (
    "Summarise the following conversation excerpts into a concise paragraph "
    "preserving all decision-relevant facts:\n"
)
ROLES = ("user", "assistant")


@dataclass(frozen=True)
class MemoryState:
    conversation_id: str
    summary: str = ""
    recent_turns: tuple[tuple[str, str], ...] = ()

    @property
    def token_estimate(self) -> int:
        return estimate_tokens(self.summary + "".join(text for _, text in self.recent_turns))

    def to_dict(self) -> dict:
        return {
            "summary": self.summary,
            "recent_turns": [list(t) for t in self.recent_turns],
            "token_estimate": self.token_estimate,
        }

    @classmethod
    def from_dict(cls, conversation_id: str, data: dict) -> "MemoryState":
        turns = tuple((role, text) for role, text in data.get("recent_turns", []))
        return cls(conversation_id, data.get("summary", ""), turns)


def append_turn(memory: MemoryState, role: str, text: str) -> MemoryState:
    if role not in ROLES:
        raise ValueError(f"role must be one of {ROLES}, got {role!r}")
    return replace(memory, recent_turns=memory.recent_turns + ((role, text),))


def render_context(memory: MemoryState) -> str:
    lines = []
    if memory.summary:
        lines.append(f"Conversation summary: {memory.summary}")
    lines.extend(f"{role}: {text}" for role, text in memory.recent_turns)
    return "\n".join(lines)


def summary_prompt(previous_summary: str, evicted: tuple[tuple[str, str], ...]) -> str:
    lines = []
    if previous_summary:
        lines.append(f"Conversation summary: {previous_summary}")
    lines.extend(f"{role}: {text}" for role, text in evicted)
    return SUMMARY_PROMPT + "\n".join(lines)


def compress(
    memory: MemoryState,
    backend: Backend,
    threshold: int = DEFAULT_THRESHOLD,
    keep_window: int = DEFAULT_KEEP_WINDOW,
) -> MemoryState:
    """Fold turns older than ``keep_window`` into the summary until the
    estimate fits ``threshold``.

    The window shrinks one turn at a time if the kept turns alone are too
    large; an oversized summary with no turns left is truncated.
    """
    state = memory
    keep = keep_window
    while state.token_estimate > threshold:
        n_evict = len(state.recent_turns) - keep
        if n_evict <= 0:
            if keep > 0:
                keep -= 1
                continue
            logger.warning("memory %s: summary exceeds threshold, truncating", state.conversation_id)
            state = replace(state, summary=state.summary[: threshold * 4])
            break
        evicted = state.recent_turns[:n_evict]
        reply = backend.chat(
            ChatRequest(
                conversation_id=state.conversation_id,
                system_context="",
                user_message=summary_prompt(state.summary, evicted),
                temperature=0.0,
                stage="memory",
            )
        )
        state = MemoryState(state.conversation_id, reply.text.strip(), state.recent_turns[n_evict:])
    return state


class MemoryStore:
    """Holds conversation states, optionally checkpointed to
    ``<directory>/<conversation_id>.json``."""

    def __init__(
        self,
        directory: str | Path | None = None,
        threshold: int = DEFAULT_THRESHOLD,
        keep_window: int = DEFAULT_KEEP_WINDOW,
    ):
        self.directory = Path(directory) if directory is not None else None
        self.threshold = threshold
        self.keep_window = keep_window
        self._states: dict[str, MemoryState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def _path(self, conversation_id: str) -> Path:
        assert self.directory is not None
        return self.directory / f"{conversation_id}.json"

    def get(self, conversation_id: str) -> MemoryState:
        with self._guard:
            if conversation_id not in self._states:
                state = MemoryState(conversation_id)
                if self.directory is not None and self._path(conversation_id).is_file():
                    data = json.loads(self._path(conversation_id).read_text(encoding="utf-8"))
                    state = MemoryState.from_dict(conversation_id, data)
                self._states[conversation_id] = state
            return self._states[conversation_id]

    def put(self, state: MemoryState) -> None:
        with self._guard:
            self._states[state.conversation_id] = state

    def lock(self, conversation_id: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(conversation_id, threading.Lock())

    def save(self) -> None:
        if self.directory is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        with self._guard:
            states = list(self._states.values())
        for state in states:
            self._path(state.conversation_id).write_text(
                json.dumps(state.to_dict(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
            )

    def conversation(self, conversation_id: str) -> "Conversation":
        return Conversation(self, conversation_id)


@dataclass(frozen=True)
class Conversation:
    store: MemoryStore
    conversation_id: str

    @property
    def state(self) -> MemoryState:
        return self.store.get(self.conversation_id)

    def record(self, backend: Backend, user_text: str, assistant_text: str) -> MemoryState:
        state = append_turn(self.state, "user", user_text)
        state = append_turn(state, "assistant", assistant_text)
        if state.token_estimate > self.store.threshold:
            state = compress(state, backend, self.store.threshold, self.store.keep_window)
        self.store.put(state)
        return state


def chat_with_memory(
    backend: Backend,
    system: str,
    user: str,
    *,
    memory: Conversation | None = None,
    remember: bool = True,
    temperature: float = 1.0,
    max_output_tokens: int = 2048,
    stage: str = "",
) -> ChatResponse:
    """Send one exchange, reading (and optionally writing) conversation memory.

    Memory context travels in the system message; the user message is the
    stage prompt exactly as built by the caller.
    """
    if memory is None:
        request = ChatRequest("stateless", system, user, temperature, max_output_tokens, stage)
        return backend.chat(request)
    with memory.store.lock(memory.conversation_id):
        context = render_context(memory.state)
        system_context = f"{system}\n\n{context}" if context else system
        request = ChatRequest(memory.conversation_id, system_context, user, temperature, max_output_tokens, stage)
        response = backend.chat(request)
        if remember:
            memory.record(backend, user, response.text)
        return response


def resolve_memory(memory, item) -> Conversation | None:
    """Accept a single conversation, a per-item factory, or None."""
    if memory is None or isinstance(memory, Conversation):
        return memory
    return memory(item)
