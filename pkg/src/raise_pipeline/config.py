"""Run configuration: one JSON document, nested dataclasses."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import typing
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import ColumnMap, SplitSpec
from .errors import ConfigError
from .scoring import RewardTable

MEMORY_SCOPES = ("off", "run", "founder")


@dataclass
class BackendConfig:
    mode: str = "mock"
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "o3-mini"
    api_key_env: str = "RAISE_API_KEY"
    mock_script: str | None = None
    max_inflight: int = 4
    max_output_tokens: int = 2048


@dataclass
class DatasetConfig:
    # either `path` (split with `split`) or both `train_path` and `test_path`
    path: str | None = None
    train_path: str | None = None
    test_path: str | None = None
    columns: ColumnMap = field(default_factory=ColumnMap)
    chunk_size: int = 500


@dataclass
class StageToggles:
    two_step: bool = True
    ensemble_k: int = 3
    rl_scoring: bool = True
    memory_scope: str = "run"
    refine_rounds: int = 1


@dataclass
class Temperatures:
    reasoning: float = 1.0
    rule_extraction: float = 0.0
    policy: float = 1.0
    scoring: float = 0.0
    prediction: float = 1.0
    refinement: float = 0.0


@dataclass
class MemoryConfig:
    threshold: int = 3000
    keep_window: int = 4


@dataclass
class CostRates:
    prompt: float = 0.0
    completion: float = 0.0


@dataclass
class RunConfig:
    backend: BackendConfig = field(default_factory=BackendConfig)
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    split: SplitSpec = field(default_factory=SplitSpec)
    toggles: StageToggles = field(default_factory=StageToggles)
    rl_rewards: RewardTable = field(default_factory=RewardTable)
    memory: MemoryConfig = field(default_factory=MemoryConfig)
    temperatures: Temperatures = field(default_factory=Temperatures)
    cost_rates: CostRates = field(default_factory=CostRates)
    checkpoint_every: int = 10
    beta: float = 0.5
    output_dir: str = "runs/default"
    seed: int = 0
    # fixed lineage timestamp for reproducible policy files; wall clock when unset
    timestamp: str | None = None

    def validate(self) -> "RunConfig":
        b, t, d = self.backend, self.toggles, self.dataset
        if b.mode not in ("live", "mock"):
            raise ConfigError(f"backend.mode must be 'live' or 'mock', got {b.mode!r}")
        if b.mode == "mock" and not b.mock_script:
            raise ConfigError("mock backend needs backend.mock_script")
        if b.mode == "live" and not (b.endpoint and b.model):
            raise ConfigError("live backend needs backend.endpoint and backend.model")
        if t.ensemble_k < 1:
            raise ConfigError("toggles.ensemble_k must be >= 1")
        if t.refine_rounds < 0:
            raise ConfigError("toggles.refine_rounds must be >= 0")
        if t.memory_scope not in MEMORY_SCOPES:
            raise ConfigError(f"toggles.memory_scope must be one of {MEMORY_SCOPES}")
        if not d.path and not (d.train_path and d.test_path):
            raise ConfigError("dataset needs `path` or both `train_path` and `test_path`")
        if self.checkpoint_every < 1 or d.chunk_size < 1:
            raise ConfigError("checkpoint_every and dataset.chunk_size must be positive")
        if self.beta <= 0:
            raise ConfigError("beta must be positive")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        """Digest of every setting except the output directory."""
        data = self.to_dict()
        data.pop("output_dir")
        blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return _build(cls, data, "config").validate()

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"config not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
        config = _build(cls, data, "config")
        _resolve_paths(config, path.parent)
        return config.validate()

    def with_overrides(self, overrides: dict) -> "RunConfig":
        """Copy with dotted-key overrides, e.g. ``{"toggles.ensemble_k": 1}``."""
        data = self.to_dict()
        for dotted, value in overrides.items():
            node = data
            *parents, leaf = dotted.split(".")
            for p in parents:
                if p not in node or not isinstance(node[p], dict):
                    raise ConfigError(f"unknown config key {dotted!r}")
                node = node[p]
            if leaf not in node:
                raise ConfigError(f"unknown config key {dotted!r}")
            node[leaf] = value
        return RunConfig.from_dict(data)


def _build(cls, data, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        hint = hints[name]
        if dataclasses.is_dataclass(hint):
            value = _build(hint, value, f"{where}.{name}")
        kwargs[name] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _resolve_paths(config: RunConfig, base: Path) -> None:
    """Relative data/script paths are taken relative to the config file."""

    def fix(p: str | None) -> str | None:
        if p is None or Path(p).is_absolute():
            return p
        return str((base / p).resolve())

    config.dataset.path = fix(config.dataset.path)
    config.dataset.train_path = fix(config.dataset.train_path)
    config.dataset.test_path = fix(config.dataset.test_path)
    config.backend.mock_script = fix(config.backend.mock_script)
