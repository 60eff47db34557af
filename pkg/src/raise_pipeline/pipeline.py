"""End-to-end orchestration with per-stage artifacts, a checksummed
manifest, resume, and an ablation harness.

Stage order: ingest, reason, extract_rules, compile_policy, then for each
scoring round an initial test pass scored by the judge (``score_r<N>``)
followed by policy refinement (``refine_r<N>``), then the final ensemble
prediction pass and evaluation.
"""

from __future__ import annotations

import hashlib
import json
import logging
import shutil
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import prediction as pred
from .checkpoint import read_rows, run_checkpointed, write_rows
from .config import RunConfig
from .dataset import FounderRecord, ProfileSet, load_profiles, stratified_split
from .errors import AuthError, ConfigError, ConfigMismatch, ManifestError, RaiseError, StageFatal
from .evaluation import compute_metrics, confusion, metrics_report, render_table
from .labels import OutcomeLabel, RuleOutcome
from .llm import Backend, CostReport, Gateway, MockBackend, OpenAICompatibleBackend
from .memory import Conversation, MemoryStore
from .policy import DecisionPolicy, compile_policy, latest_policy, policy_filename, refine_policy, save_policy, utc_now
from .reasoning import generate_all, read_reasoning_logs
from .rules import Rule, extract_rule, parse_rule, render_rule
from .scoring import RlScore, adjust_score, judge_base_score, summarize_scores

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"
SPLIT = "split.json"
REASONING = "reasoning_logs.csv"
RULES = "extracted_rules.csv"
PREDICTIONS = "predictions.csv"
RL_SCORES = "rl_scores.csv"
METRICS = "metrics.json"
METRICS_TABLE = "metrics.txt"
COST = "cost_report.json"
MEMORY_DIR = "memory"
RULE_COLUMNS = ("founder_id", "outcome_actual", "rule_canonical", "via_fallback", "raw_reply", "status")
SCORE_COLUMNS = ("founder_id", "base", "case", "adjustment", "final")
ERROR_LABEL = "ERROR"


def initial_predictions_file(round_: int) -> str:
    return f"initial_predictions_r{round_}.csv"


def rl_scores_file(round_: int) -> str:
    return f"rl_scores_r{round_}.csv"


def stage_names(config: RunConfig) -> list[str]:
    names = ["ingest", "reason", "extract_rules", "compile_policy"]
    t = config.toggles
    if t.rl_scoring:
        for r in range(1, max(t.refine_rounds, 1) + 1):
            names.append(f"score_r{r}")
            if r <= t.refine_rounds:
                names.append(f"refine_r{r}")
    names += ["predict", "evaluate"]
    return names


def sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class RunArtifacts:
    output_dir: Path
    completed_stages: list[str]
    metrics: dict | None = None

    def path(self, name: str) -> Path:
        return self.output_dir / name

    @property
    def manifest(self) -> Path:
        return self.output_dir / MANIFEST


@dataclass
class Manifest:
    config_hash: str
    completed_stages: list[str] = field(default_factory=list)
    # stage -> {relative path: sha256}
    stage_outputs: dict[str, dict[str, str]] = field(default_factory=dict)
    call_counts: dict[str, int] = field(default_factory=dict)
    cost: dict = field(default_factory=dict)
    status: str = "running"

    def to_dict(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "status": self.status,
            "completed_stages": self.completed_stages,
            "stage_outputs": self.stage_outputs,
            "call_counts": self.call_counts,
            "cost": self.cost,
        }

    @classmethod
    def load(cls, path: Path) -> "Manifest":
        if not path.is_file():
            raise ManifestError(f"no manifest at {path}")
        data = json.loads(path.read_text(encoding="utf-8"))
        return cls(
            data["config_hash"],
            list(data.get("completed_stages", [])),
            dict(data.get("stage_outputs", {})),
            dict(data.get("call_counts", {})),
            dict(data.get("cost", {})),
            data.get("status", "running"),
        )

    def save(self, path: Path) -> None:
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n", encoding="utf-8")
        tmp.replace(path)

    def checksums(self) -> dict[str, str]:
        """Latest recorded checksum per file across completed stages."""
        out: dict[str, str] = {}
        for stage in self.completed_stages:
            out.update(self.stage_outputs.get(stage, {}))
        return out


def validate_manifest(output_dir: str | Path) -> list[str]:
    """Problems found checking recorded artifacts against disk; empty if intact."""
    output_dir = Path(output_dir)
    manifest = Manifest.load(output_dir / MANIFEST)
    problems = []
    for rel, digest in manifest.checksums().items():
        p = output_dir / rel
        if not p.is_file():
            problems.append(f"missing: {rel}")
        elif sha256_file(p) != digest:
            problems.append(f"modified: {rel}")
    return problems


def build_backend(config: RunConfig) -> Backend:
    b = config.backend
    if b.mode == "mock":
        try:
            return MockBackend.from_file(b.mock_script)
        except (OSError, ValueError, TypeError, KeyError) as exc:
            raise ConfigError(f"cannot load mock script {b.mock_script}: {exc}") from exc
    return OpenAICompatibleBackend(b.endpoint, b.model, api_key_env=b.api_key_env)


def _rule_from_row(row: dict[str, str]) -> Rule | None:
    if row.get("status", "ok") != "ok" or not row["rule_canonical"]:
        return None
    parsed = parse_rule(row["rule_canonical"])
    return Rule(parsed.branches, parsed.outcome, row["raw_reply"], row["via_fallback"] == "true", row["founder_id"])


class Pipeline:
    """Runs stages against one output directory.

    ``backend`` overrides the configured backend (tests pass a mock or an
    instrumented wrapper).
    """

    def __init__(self, config: RunConfig, backend: Backend | None = None):
        self.config = config
        self.out = Path(config.output_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.backend = backend if backend is not None else build_backend(config)
        self.gateway = Gateway(
            self.backend,
            max_inflight=config.backend.max_inflight,
            prompt_rate=config.cost_rates.prompt,
            completion_rate=config.cost_rates.completion,
        )
        scope = config.toggles.memory_scope
        self.memory_store = (
            None
            if scope == "off"
            else MemoryStore(self.out / MEMORY_DIR, config.memory.threshold, config.memory.keep_window)
        )
        self.manifest = self._open_manifest()
        self._restore_accounting()
        self._sets: tuple[ProfileSet, ProfileSet] | None = None

    # ------------------------------------------------------------------ plumbing

    def _open_manifest(self) -> Manifest:
        path = self.out / MANIFEST
        if path.is_file():
            manifest = Manifest.load(path)
            if manifest.config_hash != self.config.config_hash():
                raise ConfigMismatch(f"{path} was written by a different configuration")
            return manifest
        return Manifest(self.config.config_hash())

    def _restore_accounting(self) -> None:
        cost = self.manifest.cost
        if cost:
            self.gateway.report = CostReport(
                cost["total_prompt_tokens"],
                cost["total_completion_tokens"],
                cost["call_count"],
                self.config.cost_rates.prompt,
                self.config.cost_rates.completion,
                cost.get("estimated", False),
            )
        self.gateway.stage_calls = Counter(self.manifest.call_counts)

    def _clock(self) -> str:
        return self.config.timestamp or utc_now()

    def _memory(self, key: str) -> Conversation | None:
        if self.memory_store is None:
            return None
        if self.config.toggles.memory_scope == "run":
            return self.memory_store.conversation("run")
        return self.memory_store.conversation(key)

    def _founder_memory(self, record: FounderRecord) -> Conversation | None:
        return self._memory(f"founder-{record.id}")

    def _workers(self) -> int:
        if self.config.toggles.memory_scope == "run" or not self.gateway.supports_concurrency:
            return 1
        return self.gateway.max_inflight

    def _save_memory(self, *_):
        if self.memory_store is not None:
            self.memory_store.save()

    def _write_json(self, name: str, data: dict) -> None:
        (self.out / name).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

    def _complete(self, stage: str, outputs: Sequence[str]) -> None:
        self._save_memory()
        self.manifest.stage_outputs[stage] = {name: sha256_file(self.out / name) for name in outputs}
        if stage not in self.manifest.completed_stages:
            self.manifest.completed_stages.append(stage)
        self._sync_accounting()

    def _sync_accounting(self) -> None:
        self.manifest.call_counts = dict(sorted(self.gateway.stage_calls.items()))
        report = self.gateway.report
        self.manifest.cost = report.to_dict()
        self.manifest.save(self.out / MANIFEST)

    # ------------------------------------------------------------------ data

    def _load(self, path: str) -> ProfileSet:
        d = self.config.dataset
        return load_profiles(path, d.chunk_size, d.columns)

    def profile_sets(self) -> tuple[ProfileSet, ProfileSet]:
        if self._sets is not None:
            return self._sets
        split_path = self.out / SPLIT
        if not split_path.is_file():
            raise StageFatal("ingest", "split.json missing; run the ingest stage first")
        split = json.loads(split_path.read_text(encoding="utf-8"))
        d = self.config.dataset
        if d.path:
            full = self._load(d.path)
            train_src = test_src = full
        else:
            train_src, test_src = self._load(d.train_path), self._load(d.test_path)

        def pick(src: ProfileSet, ids: list[str]) -> ProfileSet:
            index = {r.id: r for r in src.records}
            return ProfileSet(tuple(index[i] for i in ids), src.source_path, src.chunk_count)

        self._sets = (pick(train_src, split["train"]), pick(test_src, split["test"]))
        return self._sets

    def stage_ingest(self) -> None:
        d = self.config.dataset
        if d.path:
            train, test = stratified_split(self._load(d.path), self.config.split)
        else:
            train, test = self._load(d.train_path), self._load(d.test_path)
        if not len(test):
            raise StageFatal("ingest", "empty test set")
        self._sets = (train, test)
        self._write_json(SPLIT, {"train": train.ids(), "test": test.ids()})
        self._complete("ingest", [SPLIT])

    # ------------------------------------------------------------------ training side

    def stage_reason(self) -> None:
        train, _ = self.profile_sets()
        generate_all(
            train.records,
            self.gateway,
            memory=self._founder_memory if self.memory_store is not None else None,
            checkpoint_every=self.config.checkpoint_every,
            checkpoint_path=self.out / REASONING,
            temperature=self.config.temperatures.reasoning,
            workers=self._workers(),
            on_checkpoint=self._save_memory,
        )
        self._complete("reason", [REASONING])

    def stage_extract_rules(self) -> None:
        logs = [log for log in read_reasoning_logs(self.out / REASONING) if log.ok]
        train, _ = self.profile_sets()
        by_id = {r.id: r for r in train.records}

        def work(log) -> dict[str, str]:
            row = {"founder_id": log.founder_id, "outcome_actual": log.outcome.value}
            try:
                memory = self._founder_memory(by_id[log.founder_id]) if log.founder_id in by_id else self._memory("run")
                rule = extract_rule(log, self.gateway, memory, self.config.temperatures.rule_extraction)
            except AuthError:
                raise
            except Exception as exc:  # noqa: BLE001 - per-founder isolation
                logger.warning("rule extraction failed for %s: %s", log.founder_id, exc)
                return row | {"rule_canonical": "", "via_fallback": "", "raw_reply": "", "status": f"error: {exc}"}
            return row | {
                "rule_canonical": render_rule(rule),
                "via_fallback": str(rule.via_fallback).lower(),
                "raw_reply": rule.raw_text,
                "status": "ok",
            }

        rows = run_checkpointed(
            logs,
            key=lambda log: log.founder_id,
            work=work,
            path=self.out / RULES,
            columns=RULE_COLUMNS,
            key_column="founder_id",
            every=self.config.checkpoint_every,
            on_checkpoint=self._save_memory,
            workers=self._workers(),
        )
        if not any(_rule_from_row(r) for r in rows):
            raise StageFatal("extract_rules", "no rules extracted")
        self._complete("extract_rules", [RULES])

    def rules(self) -> list[Rule]:
        return [r for r in (_rule_from_row(row) for row in read_rows(self.out / RULES)) if r is not None]

    def stage_compile_policy(self) -> None:
        policy = compile_policy(
            self.rules(), self.gateway, self._memory("policy"), self.config.temperatures.policy, self._clock
        )
        save_policy(policy, self.out)
        self._complete("compile_policy", [policy_filename(1)])

    def policy(self) -> DecisionPolicy:
        policy = latest_policy(self.out)
        if policy is None:
            raise StageFatal("compile_policy", "no policy found; run compile-policy first")
        return policy

    # ------------------------------------------------------------------ scoring / refinement

    def _prediction_error_row(self, record: FounderRecord, exc: Exception) -> dict[str, str]:
        return {
            "founder_id": record.id,
            "actual": record.outcome.value,
            "predicted": ERROR_LABEL,
            "refined": "false",
            "explanation": f"{type(exc).__name__}: {exc}",
            "candidate_labels": "",
        }

    def stage_score(self, round_: int) -> None:
        _, test = self.profile_sets()
        policy = self.policy()
        by_id = {r.id: r for r in test.records}

        def initial(record: FounderRecord) -> dict[str, str]:
            try:
                cand = pred.predict_once(
                    record, policy, self.gateway, self._founder_memory(record), self.config.temperatures.prediction
                )
            except AuthError:
                raise
            except Exception as exc:  # noqa: BLE001
                return self._prediction_error_row(record, exc)
            return pred.prediction_row(pred.FinalPrediction(record.id, cand.label, cand.explanation, (cand,)), record.outcome)

        initial_rows = run_checkpointed(
            test.records,
            key=lambda r: r.id,
            work=initial,
            path=self.out / initial_predictions_file(round_),
            columns=pred.COLUMNS,
            key_column="founder_id",
            every=self.config.checkpoint_every,
            on_checkpoint=self._save_memory,
            workers=self._workers(),
        )
        scorable = [row for row in initial_rows if row["predicted"] != ERROR_LABEL]

        def score(row: dict[str, str]) -> dict[str, str]:
            record = by_id[row["founder_id"]]
            try:
                base = judge_base_score(row["explanation"], self.gateway, self._founder_memory(record))
            except AuthError:
                raise
            except Exception as exc:  # noqa: BLE001
                logger.warning("scoring failed for %s: %s", record.id, exc)
                return {"founder_id": record.id, "base": "", "case": ERROR_LABEL, "adjustment": "", "final": ""}
            s = adjust_score(base, record.outcome, RuleOutcome(row["predicted"]), self.config.rl_rewards, record.id)
            return s.to_row()

        run_checkpointed(
            scorable,
            key=lambda row: row["founder_id"],
            work=score,
            path=self.out / rl_scores_file(round_),
            columns=SCORE_COLUMNS,
            key_column="founder_id",
            every=self.config.checkpoint_every,
            on_checkpoint=self._save_memory,
            workers=self._workers(),
        )
        shutil.copyfile(self.out / rl_scores_file(round_), self.out / RL_SCORES)
        self._complete(f"score_r{round_}", [initial_predictions_file(round_), rl_scores_file(round_), RL_SCORES])

    def stage_refine(self, round_: int) -> None:
        rows = read_rows(self.out / rl_scores_file(round_))
        scores = [RlScore.from_row(r) for r in rows if r["case"] != ERROR_LABEL]
        initial = {r["founder_id"]: r for r in read_rows(self.out / initial_predictions_file(round_))}
        predictions = {i: (RuleOutcome(r["predicted"]), r["explanation"]) for i, r in initial.items() if r["predicted"] != ERROR_LABEL}
        actuals = {i: OutcomeLabel(r["actual"]) for i, r in initial.items()}
        policy = self.policy()
        outputs = []
        if scores:
            perf = summarize_scores(scores, predictions, actuals)
            refined = refine_policy(
                policy, self.rules(), perf, self.gateway, self._memory("policy"), self.config.temperatures.policy, self._clock
            )
            if refined.version != policy.version:
                save_policy(refined, self.out)
                outputs.append(policy_filename(refined.version))
        else:
            logger.warning("round %d: no valid scores; policy left at v%d", round_, policy.version)
        self._complete(f"refine_r{round_}", outputs)

    # ------------------------------------------------------------------ prediction / evaluation

    def stage_predict(self) -> None:
        _, test = self.profile_sets()
        policy = self.policy()
        t = self.config.toggles
        temps = self.config.temperatures

        def work(record: FounderRecord) -> dict[str, str]:
            memory = self._founder_memory(record)
            try:
                final = pred.predict_ensemble(record, policy, t.ensemble_k, self.gateway, memory, temps.prediction)
                if t.two_step:
                    final = pred.refine_prediction(final, record, policy, self.gateway, memory, temps.refinement)
            except AuthError:
                raise
            except RaiseError as exc:
                return self._prediction_error_row(record, exc)
            return pred.prediction_row(final, record.outcome)

        run_checkpointed(
            test.records,
            key=lambda r: r.id,
            work=work,
            path=self.out / PREDICTIONS,
            columns=pred.COLUMNS,
            key_column="founder_id",
            every=self.config.checkpoint_every,
            on_checkpoint=self._save_memory,
            workers=self._workers(),
        )
        self._complete("predict", [PREDICTIONS])

    def stage_evaluate(self) -> dict:
        rows = read_rows(self.out / PREDICTIONS)
        pairs = [(RuleOutcome(r["predicted"]), OutcomeLabel(r["actual"])) for r in rows if r["predicted"] != ERROR_LABEL]
        if not pairs:
            raise StageFatal("evaluate", "no valid predictions to evaluate")
        errors = len(rows) - len(pairs)
        if errors:
            logger.warning("%d founder(s) without a prediction excluded from metrics", errors)
        cm = confusion(pairs)
        m = compute_metrics(cm, self.config.beta)
        report = metrics_report(cm, m)
        self._write_json(METRICS, report)
        (self.out / METRICS_TABLE).write_text(render_table(cm, m), encoding="utf-8")
        self._complete("evaluate", [METRICS, METRICS_TABLE])
        return report

    # ------------------------------------------------------------------ driver

    def run_stage(self, name: str):
        if name.startswith("score_r"):
            return self.stage_score(int(name[len("score_r") :]))
        if name.startswith("refine_r"):
            return self.stage_refine(int(name[len("refine_r") :]))
        return getattr(self, f"stage_{name}")()

    def run(self, stop_after: str | None = None) -> RunArtifacts:
        """Run every stage not yet recorded as complete."""
        try:
            for name in stage_names(self.config):
                if name in self.manifest.completed_stages:
                    continue
                logger.info("stage %s", name)
                self.run_stage(name)
                if name == stop_after:
                    break
        except BaseException:
            # keep call/cost totals of the partial stage for the resumed run
            self._sync_accounting()
            raise
        return self.finish()

    def finish(self) -> RunArtifacts:
        done = self.manifest.completed_stages
        complete = all(s in done for s in stage_names(self.config))
        self._write_json(COST, self.gateway.report.to_dict() | {"calls_per_stage": self.manifest.call_counts})
        self.manifest.status = "complete" if complete else "running"
        self._sync_accounting()
        metrics = None
        if (self.out / METRICS).is_file() and "evaluate" in done:
            metrics = json.loads((self.out / METRICS).read_text(encoding="utf-8"))
        return RunArtifacts(self.out, list(done), metrics)


_GENERATED = (
    MANIFEST, SPLIT, REASONING, RULES, PREDICTIONS, RL_SCORES, METRICS, METRICS_TABLE, COST,
    "policy_v*.json", "initial_predictions_r*.csv", "rl_scores_r*.csv", "*.tmp",
)


def reset_output_dir(output_dir: str | Path) -> None:
    """Remove artifacts of a previous run (only files this package writes)."""
    out = Path(output_dir)
    if not out.is_dir():
        return
    for pattern in _GENERATED:
        for p in out.glob(pattern):
            p.unlink()
    if (out / MEMORY_DIR).is_dir():
        for p in (out / MEMORY_DIR).glob("*.json"):
            p.unlink()


def run_pipeline(config: RunConfig, backend: Backend | None = None, stop_after: str | None = None) -> RunArtifacts:
    """Fresh end-to-end run; ``stop_after`` ends early after the named stage."""
    config.validate()
    reset_output_dir(config.output_dir)
    return Pipeline(config, backend).run(stop_after=stop_after)


def resume_run(config: RunConfig, backend: Backend | None = None, stop_after: str | None = None) -> RunArtifacts:
    """Continue a partial run: completed stages are skipped (after checksum
    validation) and the in-progress stage resumes from its checkpoint."""
    config.validate()
    out = Path(config.output_dir)
    manifest = Manifest.load(out / MANIFEST)
    if manifest.config_hash != config.config_hash():
        raise ConfigMismatch(f"{out / MANIFEST} was written by a different configuration")
    problems = validate_manifest(out)
    if problems:
        raise ManifestError("artifacts changed since they were recorded: " + ", ".join(problems))
    return Pipeline(config, backend).run(stop_after=stop_after)


# ---------------------------------------------------------------------- ablation

ABLATION_PRESETS: dict[str, dict] = {
    "baseline": {
        "toggles.two_step": False,
        "toggles.ensemble_k": 1,
        "toggles.rl_scoring": False,
        "toggles.memory_scope": "off",
        "toggles.refine_rounds": 0,
    },
    "two_step": {
        "toggles.two_step": True,
        "toggles.ensemble_k": 1,
        "toggles.rl_scoring": False,
        "toggles.memory_scope": "off",
        "toggles.refine_rounds": 0,
    },
    "rl": {
        "toggles.two_step": False,
        "toggles.ensemble_k": 1,
        "toggles.rl_scoring": True,
        "toggles.memory_scope": "off",
        "toggles.refine_rounds": 1,
    },
    "ensemble": {
        "toggles.two_step": False,
        "toggles.ensemble_k": 3,
        "toggles.rl_scoring": False,
        "toggles.memory_scope": "off",
        "toggles.refine_rounds": 0,
    },
    "memory": {
        "toggles.two_step": False,
        "toggles.ensemble_k": 1,
        "toggles.rl_scoring": False,
        "toggles.memory_scope": "run",
        "toggles.refine_rounds": 0,
    },
    "combined": {
        "toggles.two_step": True,
        "toggles.ensemble_k": 3,
        "toggles.rl_scoring": True,
        "toggles.memory_scope": "run",
        "toggles.refine_rounds": 1,
    },
}

ABLATION_METRICS = ("precision", "recall", "f1", "mcc", "accuracy")


@dataclass
class AblationRow:
    name: str
    metrics: dict | None
    error: str | None = None


def ablation_matrix(
    base_config: RunConfig,
    toggles: Sequence[str | tuple[str, dict]],
    backend_factory=None,
) -> list[AblationRow]:
    """One fresh run per toggle set under ``<output_dir>/<name>``; writes
    ``ablation.csv`` and ``ablation.txt`` in the base output directory.

    Each toggle set is a preset name or a ``(name, overrides)`` pair.
    """
    if not toggles:
        raise ValueError("ablation needs at least one toggle set")
    base_out = Path(base_config.output_dir)
    rows = []
    for item in toggles:
        name, overrides = (item, ABLATION_PRESETS[item]) if isinstance(item, str) else item
        try:
            config = base_config.with_overrides({**overrides, "output_dir": str(base_out / name)})
            backend = backend_factory() if backend_factory else None
            result = run_pipeline(config, backend)
            rows.append(AblationRow(name, result.metrics))
        except RaiseError as exc:
            logger.warning("ablation run %s failed: %s", name, exc)
            rows.append(AblationRow(name, None, str(exc)))
    write_rows(
        base_out / "ablation.csv",
        ("configuration",) + ABLATION_METRICS + ("error",),
        [
            {"configuration": r.name, "error": r.error or ""}
            | {k: (f"{r.metrics[k]:.3f}" if r.metrics else "") for k in ABLATION_METRICS}
            for r in rows
        ],
    )
    (base_out / "ablation.txt").write_text(render_ablation_table(rows), encoding="utf-8")
    return rows


def render_ablation_table(rows: Sequence[AblationRow]) -> str:
    width = max([len("Configuration")] + [len(r.name) for r in rows])
    header = f"{'Configuration':<{width}} " + " ".join(f"{m.capitalize() if m != 'mcc' else 'MCC':>9}" for m in ABLATION_METRICS)
    lines = [header]
    for r in rows:
        if r.metrics is None:
            lines.append(f"{r.name:<{width}} error: {r.error}")
        else:
            lines.append(f"{r.name:<{width}} " + " ".join(f"{r.metrics[m]:>9.3f}" for m in ABLATION_METRICS))
    return "\n".join(lines) + "\n"
