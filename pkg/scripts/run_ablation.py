"""Ablation table over the toggle presets using the order-free fixture
script. Numbers are produced by scripted replies, so they only show that the
harness wires each configuration correctly; per-stage call counts are
printed to compare the cost of each enhancement.

    python scripts/run_ablation.py [--out runs/ablation] [--preset NAME ...]
"""

import argparse
import json
from pathlib import Path

from raise_pipeline.config import RunConfig
from raise_pipeline.pipeline import ABLATION_PRESETS, ablation_matrix, render_ablation_table

FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "golden"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="runs/ablation")
    ap.add_argument("--preset", action="append", choices=sorted(ABLATION_PRESETS))
    args = ap.parse_args()

    config = RunConfig.load(FIXTURE / "config.json").with_overrides(
        {"output_dir": args.out, "backend.mock_script": str(FIXTURE / "scenario_script.json")}
    )
    names = args.preset or list(ABLATION_PRESETS)
    rows = ablation_matrix(config, names)
    print(render_ablation_table(rows), end="")

    print("\nbackend calls per run")
    baseline = None
    for name in names:
        manifest = json.loads((Path(args.out) / name / "manifest.json").read_text())
        total = sum(manifest["call_counts"].values())
        baseline = baseline or total
        stages = ", ".join(f"{k}={v}" for k, v in manifest["call_counts"].items())
        print(f"  {name:<10} {total:>4} ({total / baseline:.1f}x first row)  {stages}")


if __name__ == "__main__":
    main()
