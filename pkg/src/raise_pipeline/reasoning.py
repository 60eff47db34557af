"""Chain-of-thought reasoning logs explaining each founder's known outcome."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .checkpoint import read_rows, run_checkpointed
from .dataset import FounderRecord, render_profile_prompt_block
from .errors import AuthError, EmptyReply
from .labels import OutcomeLabel
from .llm import Backend, TokenUsage
from .memory import chat_with_memory, resolve_memory

logger = logging.getLogger(__name__)

REASONING_SYSTEM = (
    "You are an expert startup analyst. Given a founder's background and startup description, "
    "provide a concise, clear, structured reflection explaining the key reason(s) for founder "
    "success or failure."
)
TASK_INSTRUCTION = (
    "Explain step by step the factors from the founder's background and the startup that "
    "contributed to this outcome."
)
COLUMNS = ("founder_id", "outcome", "reasoning_text", "prompt_tokens", "completion_tokens", "status")
CHECKPOINT_FILE = "reasoning_logs.csv"


@dataclass(frozen=True)
class ReasoningLog:
    founder_id: str
    text: str
    outcome: OutcomeLabel
    usage: TokenUsage = TokenUsage()
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_row(self) -> dict[str, str]:
        return {
            "founder_id": self.founder_id,
            "outcome": self.outcome.value,
            "reasoning_text": self.text,
            "prompt_tokens": str(self.usage.prompt_tokens),
            "completion_tokens": str(self.usage.completion_tokens),
            "status": self.status,
        }

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "ReasoningLog":
        return cls(
            founder_id=row["founder_id"],
            text=row["reasoning_text"],
            outcome=OutcomeLabel(row["outcome"]),
            usage=TokenUsage(int(row["prompt_tokens"] or 0), int(row["completion_tokens"] or 0)),
            status=row["status"],
        )


def reasoning_prompt(record: FounderRecord) -> str:
    return "\n".join(
        [
            render_profile_prompt_block(record),
            f"Outcome: {record.outcome.value}",
            TASK_INSTRUCTION,
        ]
    )


def generate_reasoning(record: FounderRecord, backend: Backend, memory=None, temperature: float = 1.0) -> ReasoningLog:
    reply = chat_with_memory(
        backend,
        REASONING_SYSTEM,
        reasoning_prompt(record),
        memory=memory,
        temperature=temperature,
        stage="reason",
    )
    if not reply.text.strip():
        raise EmptyReply(f"empty reasoning reply for founder {record.id}")
    return ReasoningLog(record.id, reply.text, record.outcome, reply.usage)


def generate_all(
    records: Sequence[FounderRecord],
    backend: Backend,
    memory=None,
    checkpoint_every: int = 10,
    checkpoint_path: str | Path = CHECKPOINT_FILE,
    temperature: float = 1.0,
    workers: int = 1,
    on_checkpoint: Callable[[int], None] | None = None,
) -> list[ReasoningLog]:
    """Generate logs for ``records``, resuming from ``checkpoint_path``.

    A founder whose call fails gets an error row instead of aborting the
    batch. ``memory`` is a conversation, a per-record factory, or None.
    """

    def work(record: FounderRecord) -> dict[str, str]:
        try:
            log = generate_reasoning(record, backend, resolve_memory(memory, record), temperature)
        except AuthError:
            raise
        except Exception as exc:  # noqa: BLE001 - isolate per-founder failures
            logger.warning("reasoning failed for %s: %s", record.id, exc)
            log = ReasoningLog(record.id, "", record.outcome, status=f"error: {type(exc).__name__}: {exc}")
        return log.to_row()

    rows = run_checkpointed(
        records,
        key=lambda r: r.id,
        work=work,
        path=checkpoint_path,
        columns=COLUMNS,
        key_column="founder_id",
        every=checkpoint_every,
        on_checkpoint=on_checkpoint,
        workers=workers,
    )
    return [ReasoningLog.from_row(r) for r in rows]


def read_reasoning_logs(path: str | Path) -> list[ReasoningLog]:
    return [ReasoningLog.from_row(r) for r in read_rows(path)]
