import pytest

from conftest import record
from raise_pipeline.errors import AuthError, EmptyReply
from raise_pipeline.labels import OutcomeLabel
from raise_pipeline.llm import MockBackend, ScriptEntry
from raise_pipeline.memory import MemoryStore
from raise_pipeline.reasoning import (
    REASONING_SYSTEM,
    TASK_INSTRUCTION,
    generate_all,
    generate_reasoning,
    read_reasoning_logs,
    reasoning_prompt,
)


def test_prompt_blocks():
    r = record("7", OutcomeLabel.FAILURE, li="L", cb="C", desc="D")
    assert reasoning_prompt(r) == f"Founder Profile: L | C\nStartup Description: D\nOutcome: FAILURE\n{TASK_INSTRUCTION}"


def test_generate_reasoning_verbatim():
    backend = MockBackend([ScriptEntry("next", "  step 1\nstep 2  ", 10, 4)])
    log = generate_reasoning(record(), backend)
    assert log.text == "  step 1\nstep 2  "
    assert log.usage.prompt_tokens == 10
    assert backend.calls[0].system_context == REASONING_SYSTEM


def test_empty_reply_rejected():
    with pytest.raises(EmptyReply):
        generate_reasoning(record(), MockBackend.from_responses("   "))


def test_generate_all_isolates_failures(tmp_path):
    records = [record(str(i)) for i in range(3)]
    backend = MockBackend.from_responses("a", " ", "c")
    logs = generate_all(records, backend, checkpoint_path=tmp_path / "r.csv")
    assert [log.ok for log in logs] == [True, False, True]
    assert logs[1].status.startswith("error: EmptyReply")
    assert [log.founder_id for log in read_reasoning_logs(tmp_path / "r.csv")] == ["0", "1", "2"]


def test_generate_all_propagates_auth_errors(tmp_path):
    class Denied:
        def chat(self, request):
            raise AuthError("nope")

    with pytest.raises(AuthError):
        generate_all([record()], Denied(), checkpoint_path=tmp_path / "r.csv")


def test_resume_skips_done(tmp_path):
    records = [record(str(i)) for i in range(4)]
    generate_all(records[:2], MockBackend.from_responses("a", "b"), checkpoint_path=tmp_path / "r.csv")
    backend = MockBackend.from_responses("c", "d")
    logs = generate_all(records, backend, checkpoint_path=tmp_path / "r.csv")
    assert backend.call_count == 2
    assert [log.text for log in logs] == ["a", "b", "c", "d"]


def test_memory_carries_between_founders(tmp_path):
    store = MemoryStore(threshold=10_000)
    backend = MockBackend.from_responses("first log", "second log")
    generate_all([record("1"), record("2")], backend, memory=store.conversation("run"), checkpoint_path=tmp_path / "r.csv")
    assert "first log" in backend.calls[1].system_context
    assert backend.calls[1].user_message == reasoning_prompt(record("2"))
