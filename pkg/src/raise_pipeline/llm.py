"""Chat-completion gateway: a live OpenAI-compatible backend, a scripted mock,
and token/cost accounting.

Backends expose ``chat(request) -> ChatResponse``. The gateway never edits
prompt text; callers assemble prompts and the backend sends them verbatim.
"""

from __future__ import annotations

import json
import logging
import math
import os
import threading
import time
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Protocol

import httpx

from .errors import AuthError, ScriptExhausted, TransportError

logger = logging.getLogger(__name__)

API_KEY_ENV = "RAISE_API_KEY"
DEFAULT_MAX_OUTPUT_TOKENS = 2048
RETRY_DELAYS = (1.0, 2.0, 4.0)


def estimate_tokens(text: str) -> int:
    return math.ceil(len(text) / 4)


@dataclass(frozen=True)
class ChatRequest:
    conversation_id: str
    system_context: str
    user_message: str
    temperature: float = 1.0
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    # accounting tag only, never sent to the backend
    stage: str = ""

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")


@dataclass(frozen=True)
class TokenUsage:
    prompt_tokens: int = 0
    completion_tokens: int = 0
    estimated: bool = False

    def __post_init__(self):
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise ValueError("token counts must be nonnegative")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    usage: TokenUsage = TokenUsage()


@dataclass(frozen=True)
class CostReport:
    total_prompt_tokens: int = 0
    total_completion_tokens: int = 0
    call_count: int = 0
    prompt_rate: float = 0.0
    completion_rate: float = 0.0
    estimated: bool = False

    @property
    def estimated_cost(self) -> float:
        return self.prompt_rate * self.total_prompt_tokens + self.completion_rate * self.total_completion_tokens

    def to_dict(self) -> dict:
        return {
            "total_prompt_tokens": self.total_prompt_tokens,
            "total_completion_tokens": self.total_completion_tokens,
            "call_count": self.call_count,
            "prompt_rate": self.prompt_rate,
            "completion_rate": self.completion_rate,
            "estimated_cost": self.estimated_cost,
            "estimated": self.estimated,
        }


def accumulate_usage(report: CostReport, usage: TokenUsage) -> CostReport:
    return replace(
        report,
        total_prompt_tokens=report.total_prompt_tokens + usage.prompt_tokens,
        total_completion_tokens=report.total_completion_tokens + usage.completion_tokens,
        call_count=report.call_count + 1,
        estimated=report.estimated or usage.estimated,
    )


class Backend(Protocol):
    def chat(self, request: ChatRequest) -> ChatResponse: ...


# --------------------------------------------------------------------------- live


class OpenAICompatibleBackend:
    """HTTP backend for ``/chat/completions``-style endpoints.

    Transport failures, 429 and 5xx responses are retried after each delay in
    ``retry_delays``; 401/403 raise :class:`AuthError` immediately.
    """

    supports_concurrency = True

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        api_key_env: str = API_KEY_ENV,
        timeout: float = 120.0,
        retry_delays: tuple[float, ...] = RETRY_DELAYS,
        client: httpx.Client | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key if api_key is not None else os.environ.get(api_key_env)
        if not self.api_key:
            raise AuthError(f"no credential: set ${api_key_env}")
        self.retry_delays = retry_delays
        self._client = client or httpx.Client(timeout=timeout)
        self._sleep = sleep

    def _payload(self, request: ChatRequest) -> dict:
        messages = []
        if request.system_context:
            messages.append({"role": "system", "content": request.system_context})
        messages.append({"role": "user", "content": request.user_message})
        return {
            "model": self.model,
            "messages": messages,
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }

    def chat(self, request: ChatRequest) -> ChatResponse:
        payload = self._payload(request)
        headers = {"Authorization": f"Bearer {self.api_key}"}
        last_error = "no attempt made"
        for attempt in range(len(self.retry_delays) + 1):
            if attempt:
                delay = self.retry_delays[attempt - 1]
                logger.warning("retrying in %.1fs after: %s", delay, last_error)
                self._sleep(delay)
            try:
                resp = self._client.post(self.endpoint, json=payload, headers=headers)
            except httpx.TransportError as exc:
                last_error = f"transport error: {exc}"
                continue
            if resp.status_code in (401, 403):
                raise AuthError(f"backend rejected credential (HTTP {resp.status_code})")
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = f"HTTP {resp.status_code}"
                continue
            if resp.status_code >= 400:
                raise TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            return self._parse(resp.json(), request)
        raise TransportError(f"gave up after {len(self.retry_delays) + 1} attempts: {last_error}")

    @staticmethod
    def _parse(body: dict, request: ChatRequest) -> ChatResponse:
        try:
            text = body["choices"][0]["message"]["content"] or ""
        except (KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed completion body: {exc}") from exc
        usage = body.get("usage") or {}
        if "prompt_tokens" in usage and "completion_tokens" in usage:
            return ChatResponse(text, TokenUsage(int(usage["prompt_tokens"]), int(usage["completion_tokens"])))
        return ChatResponse(
            text,
            TokenUsage(
                estimate_tokens(request.system_context + request.user_message),
                estimate_tokens(text),
                estimated=True,
            ),
        )


# --------------------------------------------------------------------------- mock


@dataclass
class ScriptEntry:
    match: str | list[str]
    response: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    repeat: bool = False

    def matches(self, prompt: str) -> bool:
        if self.match == "next":
            return True
        needles = [self.match] if isinstance(self.match, str) else self.match
        return all(n in prompt for n in needles)


class MockBackend:
    """Deterministic scripted backend.

    Each call consumes the first unconsumed entry whose matcher accepts the
    request's user message: ``"next"`` accepts anything, a string must be a
    substring, a list of strings must all be substrings. Entries flagged
    ``repeat`` are never consumed. Every request is recorded in ``calls``.
    """

    supports_concurrency = False

    def __init__(self, entries: list[ScriptEntry]):
        self.entries = list(entries)
        self._used = [False] * len(self.entries)
        self.calls: list[ChatRequest] = []
        self._lock = threading.Lock()

    @classmethod
    def from_responses(cls, *responses: str) -> "MockBackend":
        return cls([ScriptEntry("next", r) for r in responses])

    @classmethod
    def from_file(cls, path: str | Path) -> "MockBackend":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(data, dict):
            data = data["entries"]
        return cls([ScriptEntry(**item) for item in data])

    def chat(self, request: ChatRequest) -> ChatResponse:
        with self._lock:
            self.calls.append(request)
            for i, entry in enumerate(self.entries):
                if self._used[i] or not entry.matches(request.user_message):
                    continue
                if not entry.repeat:
                    self._used[i] = True
                return ChatResponse(entry.response, TokenUsage(entry.prompt_tokens, entry.completion_tokens))
        raise ScriptExhausted(f"no scripted response for call {len(self.calls)}: {request.user_message[:80]!r}")

    @property
    def call_count(self) -> int:
        return len(self.calls)


# --------------------------------------------------------------------------- gateway


@dataclass
class Gateway:
    """Wraps a backend with an in-flight limit and cost accounting."""

    backend: Backend
    max_inflight: int = 4
    prompt_rate: float = 0.0
    completion_rate: float = 0.0
    report: CostReport = field(init=False)
    stage_calls: Counter = field(init=False, default_factory=Counter)

    def __post_init__(self):
        self.report = CostReport(prompt_rate=self.prompt_rate, completion_rate=self.completion_rate)
        self._slots = threading.BoundedSemaphore(max(1, self.max_inflight))
        self._lock = threading.Lock()
        self._conversation_locks: dict[str, threading.Lock] = {}

    @property
    def supports_concurrency(self) -> bool:
        return getattr(self.backend, "supports_concurrency", False) and self.max_inflight > 1

    def conversation_lock(self, conversation_id: str) -> threading.Lock:
        with self._lock:
            return self._conversation_locks.setdefault(conversation_id, threading.Lock())

    def chat(self, request: ChatRequest) -> ChatResponse:
        with self._slots:
            response = self.backend.chat(request)
        with self._lock:
            self.report = accumulate_usage(self.report, response.usage)
            self.stage_calls[request.stage or "unlabelled"] += 1
        return response


def complete(backend: Backend, request: ChatRequest) -> ChatResponse:
    return backend.chat(request)
