"""Regenerate tests/fixtures/golden/: six founders, a content-matched mock
script covering every stage of the combined pipeline, and a run config.

The scripted final labels are chosen by hand; the expected confusion matrix
lives in expected.json and is not computed from a pipeline run.

    python scripts/make_golden_fixture.py [--out tests/fixtures/golden]
"""

import argparse
import csv
import json
from pathlib import Path

FOUNDERS = [
    # id, name, outcome, linkedin, crunchbase, description
    ("S1", "Lumen Analytics", "success",
     "Stanford MS in CS; 6 years ML lead at Google; previously co-founded a startup acquired in 2014",
     "Founder & CEO of Lumen Analytics; raised Series B",
     "Lumen Analytics builds forecasting software for retail supply chains."),
    ("S2", "Harbor Health", "success",
     "MD from Johns Hopkins; product manager at Epic Systems for 5 years",
     "Co-founder of Harbor Health; 40 employees",
     "Harbor Health offers remote monitoring for cardiac patients."),
    ("S3", "Quill Labs", "success",
     "BA in English; freelance copywriter; self-taught developer",
     "Founder of Quill Labs; seed round led by a regional angel group",
     "Quill Labs sells writing tools for legal teams."),
    ("F1", "Nimbus Pets", "failure",
     "MBA from Wharton; consultant at McKinsey for 3 years",
     "Founder of Nimbus Pets; shut down after 2 years",
     "Nimbus Pets delivers premium pet food by subscription."),
    ("F2", "Orbit Snacks", "failure",
     "BS in Marketing; sales associate at a grocery chain",
     "Founder of Orbit Snacks; no disclosed funding",
     "Orbit Snacks makes protein bars for gamers."),
    ("F3", "Vesta Drones", "failure",
     "Dropped out of college; hobbyist drone pilot",
     "Founder of Vesta Drones; closed",
     "Vesta Drones planned drone delivery for rural pharmacies."),
]

RULES = {
    "S1": "IF founder has prior startup acquisition AND technical leadership at a top tech company "
          "THEN likelihood_of_success = HIGH.",
    "S2": "**Rule:** IF founder has deep domain expertise in healthcare AND product management experience "
          "THEN likelihood_of_success = HIGH",
    "S3": "IF founder targets a niche professional market AND secured early angel funding "
          "THEN likelihood_of_success = HIGH.",
    "F1": "IF founder lacks operating experience in the target industry AND business model depends on "
          "costly logistics THEN likelihood_of_success = LOW.",
    "F2": "IF founder has no technical or product background AND no disclosed funding "
          "THEN likelihood_of_success = LOW.",
    # unparsable on purpose: exercises the fallback extractor
    "F3": "The founder had limited experience and an unproven regulatory path.",
}

# initial test pass (policy v1) and final ensemble pass (policy v2)
INITIAL = {"S1": "HIGH", "S2": "HIGH", "S3": "LOW", "F1": "HIGH", "F2": "LOW", "F3": "LOW"}
JUDGE = {"S1": "0.8", "S2": "0.7", "S3": "0.5", "F1": "0.6", "F2": "0.9", "F3": "0.4"}
CANDIDATES = {
    "S1": ["HIGH", "HIGH", "HIGH"],
    "S2": ["HIGH", "LOW", "HIGH"],
    "S3": ["LOW", "LOW", "LOW"],
    "F1": ["HIGH", "LOW", "HIGH"],
    "F2": ["HIGH", "HIGH", "LOW"],
    "F3": ["LOW", None, "LOW"],
}
REFINED = {"S1": "HIGH", "S2": "HIGH", "S3": "LOW", "F1": "HIGH", "F2": "LOW", "F3": None}

EXPECTED = {
    "predicted": {"S1": "HIGH", "S2": "HIGH", "S3": "LOW", "F1": "HIGH", "F2": "LOW", "F3": "LOW"},
    "confusion": {"tp": 2, "fp": 1, "fn": 1, "tn": 2},
    "metrics": {"precision": 0.667, "recall": 0.667, "f1": 0.667, "mcc": 0.333, "accuracy": 0.667},
}


def entry(match, response, prompt_tokens=120, completion_tokens=40, repeat=False):
    item = {"match": match, "response": response, "prompt_tokens": prompt_tokens, "completion_tokens": completion_tokens}
    if repeat:
        item["repeat"] = True
    return item


def build_script():
    names = {f[0]: f[1] for f in FOUNDERS}
    script = [
        entry("Summarise the following conversation excerpts", "Earlier turns covered founder analyses and policy drafts.", repeat=True)
    ]
    for fid, name, outcome, *_ in FOUNDERS:
        verdict = "succeeded" if outcome == "success" else "failed"
        script.append(entry(
            ["Explain step by step", name],
            f"{name} {verdict}. Step 1: the founder background. Step 2: the market. Step 3: execution.",
        ))
    for fid, name, *_ in FOUNDERS:
        script.append(entry(["Reasoning log:", name], RULES[fid]))
    script.append(entry(
        ["compile a concise decision policy", "from successful founder"],
        "POLICY-V1 IF founder has prior exits OR deep domain expertise THEN likelihood_of_success = HIGH.",
    ))
    script.append(entry(
        ["compile a concise decision policy", "from unsuccessful founder"],
        "POLICY-V1 IF founder lacks industry experience OR funding THEN likelihood_of_success = LOW.",
    ))
    for fid, label in INITIAL.items():
        script.append(entry(
            ["Return your prediction", "POLICY-V1", names[fid]],
            f"Prediction: {label}\nExplanation: initial read of {names[fid]} against the policy.",
        ))
    for fid, score in JUDGE.items():
        script.append(entry(["Score the following reasoning trace", f"initial read of {names[fid]}"], score))
    script.append(entry(
        ["Refine the following decision policy for predicting startup success"],
        "POLICY-V2 IF founder has a prior exit AND technical depth THEN likelihood_of_success = HIGH.",
    ))
    script.append(entry(
        ["Refine the following decision policy for predicting startup failure"],
        "POLICY-V2 IF founder lacks industry experience AND funding THEN likelihood_of_success = LOW.",
    ))
    for fid, labels in CANDIDATES.items():
        for i, label in enumerate(labels):
            if label is None:
                reply = "I cannot decide for this founder."
            else:
                reply = f"**Prediction:** {label}\n**Explanation:** candidate {i + 1} for {names[fid]}."
            script.append(entry(["Return your prediction", "POLICY-V2", names[fid]], reply))
    for fid, label in REFINED.items():
        reply = "The initial reasoning is acceptable." if label is None else f"{label}. Reviewed {names[fid]} against the policy."
        script.append(entry(["strict evaluator", names[fid]], reply))
    return script


def build_scenario_script():
    """Order-free variant: every entry repeats, so any toggle set (k, two-step,
    memory, refinement rounds) can run against it. Final labels follow INITIAL."""
    names = {f[0]: f[1] for f in FOUNDERS}
    script = [entry("Summarise the following conversation excerpts", "Summary of earlier turns.", repeat=True)]
    for fid, name, outcome, *_ in FOUNDERS:
        verdict = "succeeded" if outcome == "success" else "failed"
        script.append(entry(["Explain step by step", name], f"{name} {verdict} for stated reasons.", repeat=True))
        script.append(entry(["Reasoning log:", name], RULES[fid], repeat=True))
    script.append(entry(["compile a concise decision policy", "from successful founder"], "POLICY success text.", repeat=True))
    script.append(entry(["compile a concise decision policy", "from unsuccessful founder"], "POLICY failure text.", repeat=True))
    script.append(entry(["Refine the following decision policy"], "POLICY refined text.", repeat=True))
    for fid, label in INITIAL.items():
        script.append(entry(
            ["Return your prediction", names[fid]],
            f"Prediction: {label}\nExplanation: policy read of {names[fid]}.",
            repeat=True,
        ))
        script.append(entry(["Score the following reasoning trace", names[fid]], JUDGE[fid], repeat=True))
        script.append(entry(["strict evaluator", names[fid]], f"{label}. Confirmed for {names[fid]}.", repeat=True))
    return script


CONFIG = {
    "backend": {"mode": "mock", "mock_script": "mock_script.json"},
    "dataset": {"train_path": "founders.csv", "test_path": "founders.csv"},
    "toggles": {"two_step": True, "ensemble_k": 3, "rl_scoring": True, "memory_scope": "run", "refine_rounds": 1},
    "memory": {"threshold": 400, "keep_window": 4},
    "cost_rates": {"prompt": 1.1e-06, "completion": 4.4e-06},
    "checkpoint_every": 1,
    "output_dir": "runs/golden",
    "timestamp": "2025-01-01T00:00:00+00:00",
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "golden"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "founders.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["founder_id", "clean_linkedin_profile", "clean_cb_profile", "company_description", "success"])
        for fid, _name, outcome, li, cb, desc in FOUNDERS:
            w.writerow([fid, li, cb, desc, "1" if outcome == "success" else "0"])
    (out / "mock_script.json").write_text(json.dumps({"entries": build_script()}, indent=2) + "\n", encoding="utf-8")
    (out / "scenario_script.json").write_text(
        json.dumps({"entries": build_scenario_script()}, indent=2) + "\n", encoding="utf-8"
    )
    (out / "config.json").write_text(json.dumps(CONFIG, indent=2) + "\n", encoding="utf-8")
    (out / "expected.json").write_text(json.dumps(EXPECTED, indent=2) + "\n", encoding="utf-8")
    print(f"wrote fixture to {out}")


if __name__ == "__main__":
    main()
