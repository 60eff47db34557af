"""Command-line interface: ``raise-pipeline [--config F] [--out D] [--mock S] VERB``."""

from __future__ import annotations

import functools
import json
import logging
import sys
from pathlib import Path

import click

from .config import RunConfig
from .errors import AuthError, ConfigError, ConfigMismatch, RaiseError
from .pipeline import ABLATION_PRESETS, Pipeline, ablation_matrix, render_ablation_table, resume_run, run_pipeline
from .policy import import_expert_edit, latest_policy, save_policy

EXIT_CONFIG = 2
EXIT_STAGE = 3
EXIT_AUTH = 4


def _exit_code(exc: RaiseError) -> int:
    if isinstance(exc, AuthError):
        return EXIT_AUTH
    if isinstance(exc, (ConfigError, ConfigMismatch)):
        return EXIT_CONFIG
    return EXIT_STAGE


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except RaiseError as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(_exit_code(exc))

    return wrapper


def load_config(ctx: click.Context) -> RunConfig:
    opts = ctx.obj
    if opts["config"] is None:
        config = RunConfig()
    else:
        config = RunConfig.load(opts["config"])
    if opts["out"]:
        config.output_dir = opts["out"]
    if opts["mock"]:
        config.backend.mode = "mock"
        config.backend.mock_script = str(Path(opts["mock"]).resolve())
    return config.validate()


def _pipeline(ctx: click.Context) -> Pipeline:
    return Pipeline(load_config(ctx))


def _stage_command(name: str, stage: str, help_text: str):
    @main.command(name, help=help_text)
    @click.pass_context
    @handle_errors
    def command(ctx):
        p = _pipeline(ctx)
        p.run_stage(stage)
        p.finish()
        click.echo(f"{stage}: done ({p.out})")

    return command


@click.group()
@click.option("--config", "config", type=click.Path(dir_okay=False), help="Run configuration (JSON).")
@click.option("--out", "out", type=click.Path(file_okay=False), help="Output directory (overrides config).")
@click.option("--mock", "mock", type=click.Path(dir_okay=False), help="Use a scripted mock backend.")
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def main(ctx, config, out, mock, verbose):
    """Startup-success evaluation pipeline over a chat-completion backend."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"config": config, "out": out, "mock": mock}


_stage_command("ingest", "ingest", "Load profiles and write the train/test split.")
_stage_command("reason", "reason", "Generate reasoning logs for the training founders.")
_stage_command("extract-rules", "extract_rules", "Distill reasoning logs into IF-THEN rules.")
_stage_command("compile-policy", "compile_policy", "Compile rules into policy_v1.json.")
_stage_command("predict", "predict", "Predict HIGH/LOW for the test founders.")


@main.command()
@click.option("--round", "round_", default=1, show_default=True, help="Scoring round.")
@click.pass_context
@handle_errors
def score(ctx, round_):
    """Initial test pass plus judge scores (rl_scores.csv)."""
    p = _pipeline(ctx)
    p.run_stage(f"score_r{round_}")
    p.finish()
    click.echo(f"score_r{round_}: done ({p.out})")


@main.command("refine-policy")
@click.option("--round", "round_", default=1, show_default=True, help="Scoring round whose scores to use.")
@click.pass_context
@handle_errors
def refine_policy_cmd(ctx, round_):
    """Refine the latest policy with a round's scores."""
    p = _pipeline(ctx)
    p.run_stage(f"refine_r{round_}")
    p.finish()
    click.echo(f"refine_r{round_}: policy now v{p.policy().version}")


@main.command()
@click.pass_context
@handle_errors
def evaluate(ctx):
    """Compute metrics.json / metrics.txt from predictions.csv."""
    p = _pipeline(ctx)
    p.run_stage("evaluate")
    p.finish()
    click.echo((p.out / "metrics.txt").read_text(encoding="utf-8"), nl=False)


def _report(result) -> None:
    click.echo(f"stages: {', '.join(result.completed_stages)}")
    table = result.output_dir / "metrics.txt"
    if table.is_file():
        click.echo(table.read_text(encoding="utf-8"), nl=False)


@main.command()
@click.option("--stop-after", default=None, help="Stop after this stage (e.g. reason, score_r1).")
@click.pass_context
@handle_errors
def run(ctx, stop_after):
    """Fresh end-to-end run."""
    _report(run_pipeline(load_config(ctx), stop_after=stop_after))


@main.command()
@click.pass_context
@handle_errors
def resume(ctx):
    """Continue an interrupted run in --out."""
    _report(resume_run(load_config(ctx)))


@main.command()
@click.option(
    "--preset",
    "presets",
    multiple=True,
    type=click.Choice(sorted(ABLATION_PRESETS)),
    help="Toggle set to include (repeatable); default is all presets.",
)
@click.pass_context
@handle_errors
def ablate(ctx, presets):
    """One run per toggle set; writes ablation.csv and ablation.txt."""
    config = load_config(ctx)
    names = list(presets) or list(ABLATION_PRESETS)
    rows = ablation_matrix(config, names)
    click.echo(render_ablation_table(rows), nl=False)


@main.group()
def policy():
    """Export or import policy texts for expert edits."""


@policy.command("export")
@click.argument("path", type=click.Path(dir_okay=False))
@click.pass_context
@handle_errors
def policy_export(ctx, path):
    """Write the latest policy's texts to an editable JSON file."""
    config = load_config(ctx)
    current = latest_policy(config.output_dir)
    if current is None:
        raise ConfigError(f"no policy in {config.output_dir}")
    doc = {"version": current.version, "success_text": current.success_text, "failure_text": current.failure_text}
    Path(path).write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    click.echo(f"exported policy v{current.version} to {path}")


@policy.command("import")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@handle_errors
def policy_import(ctx, path):
    """Save an edited export as the next policy version."""
    config = load_config(ctx)
    current = latest_policy(config.output_dir)
    if current is None:
        raise ConfigError(f"no policy in {config.output_dir}")
    try:
        edited = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    clock = (lambda: config.timestamp) if config.timestamp else None
    new = import_expert_edit(current, edited, clock) if clock else import_expert_edit(current, edited)
    save_policy(new, config.output_dir)
    click.echo(f"imported expert edit as policy v{new.version}")


if __name__ == "__main__":
    main()
