"""Acceptance criteria; each test prints a PASS/FAIL line (also collected
into the terminal summary)."""

import filecmp
import itertools
import json
import math
import random
import time

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ACCEPTANCE_RESULTS, FIXTURES, golden_config
from raise_pipeline.evaluation import ConfusionMatrix, compute_metrics, confusion
from raise_pipeline.labels import OutcomeLabel, RuleOutcome
from raise_pipeline.llm import MockBackend
from raise_pipeline.pipeline import ablation_matrix, resume_run, run_pipeline, stage_names
from raise_pipeline.prediction import majority_vote
from raise_pipeline.rules import ConditionBranch, Rule, parse_rule, render_rule
from raise_pipeline.scoring import RewardTable, adjust_score, clamp

TOL = 0.0005
H, L = RuleOutcome.HIGH, RuleOutcome.LOW
S, F = OutcomeLabel.SUCCESS, OutcomeLabel.FAILURE


def report(key, ok, detail):
    ACCEPTANCE_RESULTS[key] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
    assert ok, detail


def _check_table(key, counts, expected):
    m = compute_metrics(ConfusionMatrix(*counts))
    got = {k: getattr(m, k) for k in expected}
    bad = {k: (round(got[k], 4), v) for k, v in expected.items() if abs(got[k] - v) > TOL}
    report(key, not bad, f"{counts} -> " + ", ".join(f"{k}={got[k]:.4f}" for k in expected) + (f" mismatches {bad}" if bad else ""))


def test_ac1_baseline_metrics():
    _check_table(
        "AC1 baseline metric table",
        (9, 31, 1, 19),
        {"precision": 0.225, "recall": 0.900, "mcc": 0.221, "accuracy": 0.467, "f1": 0.360},
    )


def test_ac2_memory_metrics():
    _check_table(
        "AC2 memory metric table",
        (9, 19, 1, 31),
        {"precision": 0.321, "f1": 0.474, "mcc": 0.388, "accuracy": 0.667},
    )


def test_ac3_combined_metrics():
    _check_table(
        "AC3 combined metric table",
        (9, 17, 1, 33),
        {"precision": 0.346, "f1": 0.500, "mcc": 0.421, "accuracy": 0.700},
    )


def test_ac4_rl_scoring_grid():
    rewards = RewardTable()
    cases = {(S, H): 0.2, (F, H): -0.2, (S, L): -0.1, (F, L): 0.05}
    bases = [i / 10 for i in range(11)]
    mismatches = []
    for base in bases:
        for (actual, predicted), adj in cases.items():
            got = adjust_score(base, actual, predicted, rewards).final
            want = clamp(base + adj, 0.0, 1.0)
            if got != want:
                mismatches.append((base, actual.value, predicted.value, got, want))
    ordering_ok = all(
        adjust_score(b, S, H).final > adjust_score(b, F, L).final > adjust_score(b, S, L).final > adjust_score(b, F, H).final
        for b in bases
        if 0.2 < b < 0.8
    )
    ok = not mismatches and ordering_ok
    report("AC4 RL scoring exactness", ok, f"44 grid points, {len(mismatches)} mismatches; TP>TN>FN>FP ordering {'holds' if ordering_ok else 'violated'}")


def test_ac5_rule_corpus_and_round_trip():
    corpus = json.loads((FIXTURES / "appendix_rules.json").read_text(encoding="utf-8"))
    failures = []
    for text in corpus:
        try:
            parse_rule(text)
        except Exception as exc:  # noqa: BLE001
            failures.append(f"{type(exc).__name__}: {text[:60]}")
    outcomes = {parse_rule(t).outcome for t in corpus if not failures}
    multi = sum(1 for t in corpus if not failures and max(len(b.conditions) for b in parse_rule(t).branches) >= 4)

    rng = random.Random(5)
    words = ["founder", "has", "prior", "exit", "deep", "domain", "expertise", "market", "team", "funding", "no", "strong"]
    trips = 0
    for _ in range(100):
        branches = tuple(
            ConditionBranch(tuple(" ".join(rng.choices(words, k=rng.randint(1, 5))) for _ in range(rng.randint(1, 4))))
            for _ in range(rng.randint(1, 3))
        )
        rule = Rule(branches, rng.choice([H, L]))
        if parse_rule(render_rule(rule)).structure() == rule.structure():
            trips += 1
    ok = len(corpus) >= 8 and not failures and outcomes == {H, L} and multi > 0 and trips == 100
    report(
        "AC5 rule corpus + round trip",
        ok,
        f"{len(corpus) - len(failures)}/{len(corpus)} corpus rules parsed (both outcomes, {multi} with >=4 clauses); {trips}/100 round trips",
    )


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.lists(st.from_regex(r"[a-z]{1,8}( [a-z]{1,8}){0,4}", fullmatch=True).filter(lambda w: "then" not in w.split()), min_size=1, max_size=4),
        min_size=1,
        max_size=3,
    ),
    st.sampled_from([H, L]),
)
def test_ac5_round_trip_property(branches, outcome):
    rule = Rule(tuple(ConditionBranch(tuple(b)) for b in branches), outcome)
    assert parse_rule(render_rule(rule)).structure() == rule.structure()


def test_ac6_vote_properties():
    checked = 0
    problems = []
    for k in (1, 3, 5):
        for labels in itertools.product([H, L], repeat=k):
            winner = majority_vote(labels)
            highs = labels.count(H)
            if winner is not (H if highs > k - highs else L):
                problems.append(("wrong", labels))
            if highs == k - highs:
                problems.append(("tie", labels))
            for perm in set(itertools.permutations(labels)):
                checked += 1
                if majority_vote(perm) is not winner:
                    problems.append(("perm", labels, perm))
    report("AC6 vote properties", not problems, f"{checked} permutations over k in {{1,3,5}}, {len(problems)} problems")


def _naive_metrics(pairs):
    tp = sum(1 for p, a in pairs if p == "HIGH" and a == "SUCCESS")
    fp = sum(1 for p, a in pairs if p == "HIGH" and a == "FAILURE")
    fn = sum(1 for p, a in pairs if p == "LOW" and a == "SUCCESS")
    tn = sum(1 for p, a in pairs if p == "LOW" and a == "FAILURE")
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    d = math.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    mcc = (tp * tn - fp * fn) / d if d else 0.0
    return {"precision": prec, "recall": rec, "f1": f1, "mcc": mcc, "accuracy": (tp + tn) / len(pairs)}


def test_ac7_metrics_oracle():
    rng = random.Random(7)
    worst = 0.0
    for _ in range(1000):
        n = rng.randint(1, 200)
        pairs = [(rng.choice(["HIGH", "LOW"]), rng.choice(["SUCCESS", "FAILURE"])) for _ in range(n)]
        m = compute_metrics(confusion((RuleOutcome(p), OutcomeLabel(a)) for p, a in pairs))
        oracle = _naive_metrics(pairs)
        worst = max(worst, max(abs(getattr(m, k) - v) for k, v in oracle.items()))
    report("AC7 metrics oracle", worst <= 1e-12, f"1000 random lists, max abs difference {worst:.2e}")


def test_ac8_golden_run(tmp_path, expected_golden):
    start = time.perf_counter()
    a = run_pipeline(golden_config(tmp_path / "a"))
    b = run_pipeline(golden_config(tmp_path / "b"))
    elapsed = time.perf_counter() - start
    identical = all(filecmp.cmp(a.path(n), b.path(n), shallow=False) for n in ("predictions.csv", "metrics.json"))
    m = a.metrics
    cm_ok = {k: m[k] for k in ("tp", "fp", "fn", "tn")} == expected_golden["confusion"]
    metrics_ok = all(abs(m[k] - v) <= TOL for k, v in expected_golden["metrics"].items())
    ok = identical and cm_ok and metrics_ok and elapsed < 5.0
    report(
        "AC8 golden end-to-end run",
        ok,
        f"byte-identical={identical}, confusion={ {k: m[k] for k in ('tp', 'fp', 'fn', 'tn')} }, two runs in {elapsed:.2f}s",
    )


class CountingMock(MockBackend):
    def __init__(self, path, budget=None):
        other = MockBackend.from_file(path)
        super().__init__(other.entries)
        self.budget = budget

    def chat(self, request):
        if self.budget is not None and len(self.calls) >= self.budget:
            raise KeyboardInterrupt("simulated interrupt")
        return super().chat(request)


def _artifacts(out):
    skip = {"manifest.json", "cost_report.json"}
    return {p.relative_to(out).as_posix(): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file() and p.name not in skip}


def test_ac9_resume_after_each_stage(tmp_path):
    script = FIXTURES / "golden" / "mock_script.json"
    ref_backend = CountingMock(script)
    ref_cfg = golden_config(tmp_path / "ref")
    run_pipeline(ref_cfg, ref_backend)
    reference = _artifacts(tmp_path / "ref")
    ref_cost = json.loads((tmp_path / "ref" / "cost_report.json").read_text())

    problems = []
    stages = stage_names(ref_cfg)
    for stage in stages[:-1]:
        out = tmp_path / f"stop_{stage}"
        cfg = golden_config(out)
        first, second = CountingMock(script), CountingMock(script)
        run_pipeline(cfg, first, stop_after=stage)
        resume_run(cfg, second)
        total = first.call_count + second.call_count
        if total != ref_backend.call_count:
            problems.append(f"{stage}: {total} calls vs {ref_backend.call_count}")
        if _artifacts(out) != reference:
            problems.append(f"{stage}: artifacts differ")
        if json.loads((out / "cost_report.json").read_text()) != ref_cost:
            problems.append(f"{stage}: cost report differs")
    report(
        "AC9 resume after each stage",
        not problems,
        f"{len(stages) - 1} interruption points, reference {ref_backend.call_count} calls" + (f"; {problems}" if problems else ", no duplicate calls"),
    )


def test_ac10_live_quality_not_asserted(tmp_path):
    """Live-model quality gains are out of reach offline; only the metric
    tables (AC1-3) and the ablation harness structure are checked."""
    cfg = golden_config(tmp_path, script="scenario_script.json")
    presets = ["baseline", "two_step", "rl", "ensemble", "memory", "combined"]
    rows = ablation_matrix(cfg, presets)
    calls = {}
    for name in presets:
        manifest = json.loads((tmp_path / name / "manifest.json").read_text())
        calls[name] = manifest["call_counts"]
    structural = (
        [r.name for r in rows] == presets
        and all(r.metrics is not None for r in rows)
        and calls["baseline"]["predict"] == 6
        and calls["ensemble"]["predict"] == 18
        and calls["two_step"].get("refine_prediction") == 6
        and "refine_prediction" not in calls["baseline"]
        and calls["rl"].get("refine_policy") == 2
        and "memory" not in calls["baseline"]
        and (tmp_path / "ablation.txt").is_file()
    )
    report(
        "AC10 live quality not reproduced (structural ablation only)",
        structural,
        "6-row ablation table built; per-stage call counts match toggles; no live-model quality asserted",
    )
