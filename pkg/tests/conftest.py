import json
import shutil
from pathlib import Path

import pytest

from raise_pipeline.config import RunConfig
from raise_pipeline.dataset import FounderRecord
from raise_pipeline.labels import OutcomeLabel

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def record(fid="1", outcome=OutcomeLabel.SUCCESS, li="li text", cb="cb text", desc="desc text"):
    return FounderRecord(fid, li, cb, desc, outcome)


def golden_config(out_dir, script="mock_script.json", **overrides) -> RunConfig:
    config = RunConfig.load(GOLDEN / "config.json")
    config = config.with_overrides({"output_dir": str(out_dir), "backend.mock_script": str(GOLDEN / script), **overrides})
    return config


@pytest.fixture
def golden_dir(tmp_path):
    """Private copy of the golden fixture (tests may write sidecars)."""
    dst = tmp_path / "golden"
    shutil.copytree(GOLDEN, dst)
    return dst


@pytest.fixture
def expected_golden():
    return json.loads((GOLDEN / "expected.json").read_text())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0][2:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
