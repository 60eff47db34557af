import json

import pytest
from click.testing import CliRunner

from conftest import GOLDEN
from raise_pipeline.checkpoint import read_rows
from raise_pipeline.cli import main
from raise_pipeline.policy import latest_policy

STAGE_VERBS = [
    ["ingest"], ["reason"], ["extract-rules"], ["compile-policy"], ["score"], ["refine-policy"], ["predict"], ["evaluate"],
]


def invoke(*args):
    return CliRunner().invoke(main, ["--config", str(GOLDEN / "config.json"), *args], catch_exceptions=False)


def test_run_end_to_end(tmp_path):
    result = invoke("--out", str(tmp_path), "run")
    assert result.exit_code == 0, result.output
    assert "MCC" in result.output and "0.333" in result.output
    assert json.loads((tmp_path / "metrics.json").read_text())["tp"] == 2


def test_stage_verbs_match_run(tmp_path):
    invoke("--out", str(tmp_path / "run"), "run")
    for verb in STAGE_VERBS:
        result = invoke("--out", str(tmp_path / "steps"), *verb)
        assert result.exit_code == 0, (verb, result.output)
    for name in ("predictions.csv", "metrics.json", "policy_v2.json", "rl_scores.csv"):
        assert (tmp_path / "steps" / name).read_bytes() == (tmp_path / "run" / name).read_bytes(), name
    manifest = json.loads((tmp_path / "steps" / "manifest.json").read_text())
    assert manifest["status"] == "complete"


def test_stop_and_resume(tmp_path):
    assert invoke("--out", str(tmp_path), "run", "--stop-after", "compile_policy").exit_code == 0
    assert not (tmp_path / "predictions.csv").exists()
    result = invoke("--out", str(tmp_path), "resume")
    assert result.exit_code == 0
    assert "evaluate" in result.output


def test_mock_flag_overrides_script(tmp_path):
    result = invoke("--out", str(tmp_path), "--mock", str(GOLDEN / "scenario_script.json"), "run")
    assert result.exit_code == 0
    assert json.loads((tmp_path / "metrics.json").read_text())["tp"] == 2


def test_config_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"toggles": {"ensemble_k": 0}}))
    result = CliRunner().invoke(main, ["--config", str(bad), "run"])
    assert result.exit_code == 2
    assert "ConfigError" in result.output


def test_config_mismatch_exit_code(tmp_path):
    invoke("--out", str(tmp_path), "run", "--stop-after", "reason")
    other = json.loads((GOLDEN / "config.json").read_text())
    other["toggles"]["ensemble_k"] = 5
    for key in ("mock_script",):
        other["backend"][key] = str(GOLDEN / other["backend"][key])
    other["dataset"] = {k: str(GOLDEN / v) for k, v in other["dataset"].items()}
    path = tmp_path / "other.json"
    path.write_text(json.dumps(other))
    result = CliRunner().invoke(main, ["--config", str(path), "--out", str(tmp_path), "resume"])
    assert result.exit_code == 2


def test_stage_fatal_exit_code(tmp_path):
    script = tmp_path / "s.json"
    script.write_text(json.dumps([{"match": "Explain step by step", "response": " ", "repeat": True}]))
    result = invoke("--out", str(tmp_path / "o"), "--mock", str(script), "run")
    assert result.exit_code == 3
    assert "extract_rules" in result.output


def test_stage_out_of_order_is_fatal(tmp_path):
    result = invoke("--out", str(tmp_path), "predict")
    assert result.exit_code == 3


def test_auth_exit_code(tmp_path, monkeypatch):
    monkeypatch.delenv("RAISE_API_KEY", raising=False)
    cfg = json.loads((GOLDEN / "config.json").read_text())
    cfg["backend"] = {"mode": "live", "endpoint": "https://example.invalid/v1/chat/completions"}
    cfg["dataset"] = {k: str(GOLDEN / v) for k, v in cfg["dataset"].items()}
    path = tmp_path / "live.json"
    path.write_text(json.dumps(cfg))
    result = CliRunner().invoke(main, ["--config", str(path), "--out", str(tmp_path / "o"), "run"])
    assert result.exit_code == 4


def test_ablate(tmp_path):
    result = invoke("--out", str(tmp_path), "--mock", str(GOLDEN / "scenario_script.json"), "ablate", "--preset", "baseline", "--preset", "combined")
    assert result.exit_code == 0, result.output
    lines = result.output.strip().splitlines()
    assert lines[0].startswith("Configuration") and len(lines) == 3
    assert (tmp_path / "ablation.csv").is_file()


def test_policy_export_import(tmp_path):
    invoke("--out", str(tmp_path), "run", "--stop-after", "compile_policy")
    export = tmp_path / "edit.json"
    assert invoke("--out", str(tmp_path), "policy", "export", str(export)).exit_code == 0
    doc = json.loads(export.read_text())
    assert doc["version"] == 1
    doc["success_text"] = "EXPERT: founders with prior exits"
    export.write_text(json.dumps(doc))
    assert invoke("--out", str(tmp_path), "policy", "import", str(export)).exit_code == 0
    policy = latest_policy(tmp_path)
    assert policy.version == 2 and policy.success_text.startswith("EXPERT")
    assert policy.lineage[-1].trigger == "expert_edit"


def test_policy_export_without_policy(tmp_path):
    assert invoke("--out", str(tmp_path), "policy", "export", str(tmp_path / "x.json")).exit_code == 2


@pytest.mark.parametrize("verb", ["score", "refine-policy"])
def test_round_option(tmp_path, verb):
    result = CliRunner().invoke(main, [verb, "--help"])
    assert "--round" in result.output


def test_outputs_keep_input_order(tmp_path):
    invoke("--out", str(tmp_path), "run")
    ids = [r["founder_id"] for r in read_rows(tmp_path / "reasoning_logs.csv")]
    assert ids == ["S1", "S2", "S3", "F1", "F2", "F3"]
