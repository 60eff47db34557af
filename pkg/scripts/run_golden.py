"""Run the checked-in 6-founder fixture end to end against its mock script
and compare the metrics with the hand-derived expectation.

    python scripts/run_golden.py [--out runs/golden]
"""

import argparse
import json
import sys
import time
from pathlib import Path

from raise_pipeline.config import RunConfig
from raise_pipeline.pipeline import run_pipeline

FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "golden"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="runs/golden")
    args = ap.parse_args()

    config = RunConfig.load(FIXTURE / "config.json").with_overrides({"output_dir": args.out})
    start = time.perf_counter()
    result = run_pipeline(config)
    elapsed = time.perf_counter() - start
    print((Path(args.out) / "metrics.txt").read_text(), end="")

    expected = json.loads((FIXTURE / "expected.json").read_text())
    got = {k: result.metrics[k] for k in expected["confusion"]}
    ok = got == expected["confusion"]
    print(f"\nconfusion {got} expected {expected['confusion']}: {'OK' if ok else 'MISMATCH'} ({elapsed:.2f}s)")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
