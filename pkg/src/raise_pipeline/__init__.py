"""Founder-success evaluation pipeline: reasoning logs, rule extraction,
policy compilation and refinement, ensemble prediction, and metrics."""

from .config import RunConfig
from .dataset import FounderRecord, ProfileSet, SplitSpec, load_profiles, stratified_split
from .evaluation import ConfusionMatrix, Metrics, compute_metrics, confusion
from .labels import OutcomeLabel, RuleOutcome
from .llm import ChatRequest, ChatResponse, Gateway, MockBackend, OpenAICompatibleBackend
from .pipeline import ablation_matrix, resume_run, run_pipeline
from .rules import Rule, parse_rule, render_rule
from .scoring import RewardTable, adjust_score

__version__ = "0.1.0"

__all__ = [
    "ChatRequest",
    "ChatResponse",
    "ConfusionMatrix",
    "FounderRecord",
    "Gateway",
    "Metrics",
    "MockBackend",
    "OpenAICompatibleBackend",
    "OutcomeLabel",
    "ProfileSet",
    "RewardTable",
    "Rule",
    "RuleOutcome",
    "RunConfig",
    "SplitSpec",
    "ablation_matrix",
    "adjust_score",
    "compute_metrics",
    "confusion",
    "load_profiles",
    "parse_rule",
    "render_rule",
    "resume_run",
    "run_pipeline",
    "stratified_split",
]
