"""Cohort experiment and report checks.

Byte reproducibility is the load-bearing property here: the same spec
must serialize to identical bytes on every run.  Analysis numbers are
cross-checked against direct recomputation from the participant
summaries embedded in the same report.
"""

import json
import math

import pytest

from glovesim.agent import AgentParams
from glovesim.experiments import (
    ExperimentSpec,
    default_baseline,
    report_to_json_bytes,
    run_experiment,
    write_report,
)
from glovesim.metrics import accuracy


def spec_for(test_id, **kw):
    defaults = dict(test_id=test_id, n_participants=17, seed=3, scene_seed=1)
    defaults.update(kw)
    return ExperimentSpec(**defaults)


def test_reports_are_byte_identical_across_runs():
    for test_id in (1, 2, 3, 4):
        spec = spec_for(test_id)
        a = report_to_json_bytes(run_experiment(spec))
        b = report_to_json_bytes(run_experiment(spec))
        assert a == b, f"test {test_id} report not reproducible"


def test_report_bytes_are_canonical():
    blob = report_to_json_bytes(run_experiment(spec_for(2)))
    text = blob.decode("utf-8")
    assert text.endswith("}\n")
    assert "\r" not in text
    parsed = json.loads(text)
    assert json.dumps(parsed, sort_keys=True, indent=2, ensure_ascii=False) + "\n" == text


def test_different_seeds_differ():
    a = report_to_json_bytes(run_experiment(spec_for(2, seed=1)))
    b = report_to_json_bytes(run_experiment(spec_for(2, seed=2)))
    assert a != b


def test_learning_report_shape_and_monotone_trend():
    report = run_experiment(spec_for(1))
    block = report["analysis"]
    assert len(block["attempt_mean_s"]) == 8
    assert block["attempt_mean_s"][0] > block["attempt_mean_s"][-1]
    assert block["improvement_percent"] > 0
    anova = block["anova_attempts"]
    assert anova["p"] < 0.001
    assert 1.0 / 7.0 <= anova["epsilon"] <= 1.0
    assert block["first_vs_last_t"]["p"] < 0.001
    assert "caveat" in block["last_attempt_normality"]


def test_placement_success_block_consistency():
    report = run_experiment(spec_for(2))
    participants = report["participants"]
    block = report["analysis"]
    # perfect condition on the color board: every participant at 9/9
    assert all(p["errors"] == 0 for p in participants)
    assert block["success"]["task_rate_percent"] == pytest.approx(100.0)
    assert block["success"]["mean_rate_percent"] == pytest.approx(100.0)
    assert block["accuracy_mean"] == pytest.approx(100.0)
    totals = [sum(p["per_attempt_times_s"]) for p in participants]
    assert block["total_time_mean_s"] == pytest.approx(sum(totals) / len(totals))


def test_comparison_report_separates_conditions():
    report = run_experiment(spec_for(3))
    block = report["analysis"]
    glove, tactile = block["glove"], block["tactile_only"]
    assert glove["success"]["task_rate_percent"] > tactile["success"]["task_rate_percent"]
    assert block["time_reduction_percent"] > 0
    assert block["paired_t_total_time"]["p"] < 0.05
    assert len(report["baseline_participants"]) == 17
    assert all(p["aux"]["glove"] == 0.0 for p in report["baseline_participants"])
    assert all(p["aux"]["glove"] == 1.0 for p in report["participants"])


def test_comparison_score_mean_equals_accuracy_mean():
    # the relative-time term cancels over the cohort by construction
    report = run_experiment(spec_for(3))
    for condition in ("glove", "tactile_only"):
        block = report["analysis"][condition]
        assert block["score_mean"] == pytest.approx(block["accuracy_mean"], abs=1e-9)


def test_comparison_accuracy_recomputes_from_participants():
    report = run_experiment(spec_for(3))
    rows = report["baseline_participants"]
    expected = sum(
        accuracy(int(p["aux"]["correct"]), p["errors"]) for p in rows
    ) / len(rows)
    assert report["analysis"]["tactile_only"]["accuracy_mean"] == pytest.approx(expected)


def test_navigation_scores_recompute():
    report = run_experiment(spec_for(4))
    block = report["analysis"]
    assert len(block["scores"]) == 17
    for p, score in zip(report["participants"], block["scores"]):
        aux = p["aux"]
        n1, n2 = aux["n1"], aux["n2"]
        expected = aux["tT_s"] / (n1 + n2) + aux["t1_s"] / n1
        assert score == pytest.approx(expected, abs=1e-12)
    mean = sum(block["scores"]) / 17
    assert block["score_mean"] == pytest.approx(mean)
    assert block["score_sd"] > 0


def test_energy_block_present_everywhere():
    for test_id in (1, 2, 3, 4):
        report = run_experiment(spec_for(test_id, n_participants=3))
        energy = report["energy"]
        assert energy["average_current_ma"] == 800.0
        assert energy["battery_life_h"] == 2.5


def test_default_baseline_is_slower_and_less_accurate():
    params = AgentParams()
    base = default_baseline(params)
    assert base.t_inf_s > params.t_inf_s
    assert base.p_error == 0.25
    assert base.t0_s >= base.t_inf_s


def test_small_cohorts_skip_inference_blocks():
    report = run_experiment(spec_for(1, n_participants=2))
    assert "anova_attempts" not in report["analysis"]
    assert "last_attempt_normality" not in report["analysis"]
    report4 = run_experiment(spec_for(4, n_participants=3))
    assert "score_normality" not in report4["analysis"]


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(test_id=0)
    with pytest.raises(ValueError):
        ExperimentSpec(test_id=1, n_participants=0)
    with pytest.raises(ValueError):
        ExperimentSpec(test_id=1, time_divisor_s=0.0)


def test_write_report_round_trips(tmp_path):
    spec = spec_for(2, n_participants=4)
    report = run_experiment(spec)
    out = tmp_path / "report.json"
    write_report(report, out)
    assert out.read_bytes() == report_to_json_bytes(report)
    assert json.loads(out.read_text())["spec"]["test_id"] == 2


def test_learning_curve_mean_tracks_model():
    spec = spec_for(1, n_participants=40, seed=12)
    report = run_experiment(spec)
    means = report["analysis"]["attempt_mean_s"]
    params = AgentParams(seed=spec.seed)
    se = params.time_sd_s / math.sqrt(40)
    for i, m in enumerate(means, start=1):
        model = params.t_inf_s + (params.t0_s - params.t_inf_s) * math.exp(
            -params.learn_rate * (i - 1)
        )
        assert abs(m - model) < 4 * se
