"""Cohort experiments: run a trial over n synthetic participants and analyze.

The output of :func:`run_experiment` is a plain dict designed for canonical
serialization: :func:`report_to_json_bytes` always produces the same bytes
for the same inputs (sorted keys, two-space indent, LF, no timestamps and
no environment-dependent fields).

Analysis per trial:

    1   learning curve over attempts, repeated-measures F with the
        sphericity correction, first-vs-last paired t
    2   success rates, time statistics, internal consistency of attempts
    3   glove vs tactile-only comparison: accuracy, composite scores,
        paired t on task times, success rates for both conditions
    4   navigation efficiency scores

Every report carries the power-budget summary for the wearable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

from .agent import AgentParams, run_baseline_cohort, run_cohort
from .device import DeviceConfig
from .energy import EnergyProfile, energy_summary
from .metrics import (
    NORMALITY_CAVEAT,
    ScoreInput,
    accuracy,
    cronbach_alpha,
    cv,
    normality_jarque_bera,
    paired_t_test,
    result_to_dict,
    rm_anova_gg,
    score_test3,
    score_test4,
    success_rate,
)
from .scene import Scene, build_setup
from .transcript import TrialTranscript, summary

REPORT_FORMAT_VERSION = 1
PLACEMENT_TOTAL = 9
DEFAULT_CAPACITY_MAH = 2000.0

# tactile-only defaults: slower plateau, no learning aid, 1-in-4 misplacement
BASELINE_SLOWDOWN = 1.5
BASELINE_P_ERROR = 0.25


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce one cohort run byte for byte."""

    test_id: int
    n_participants: int = 17
    seed: int = 0
    scene_seed: int = 0
    params: AgentParams = AgentParams()
    baseline_params: AgentParams | None = None
    time_divisor_s: float = 3.0
    capacity_mah: float = DEFAULT_CAPACITY_MAH

    def __post_init__(self) -> None:
        if self.test_id not in (1, 2, 3, 4):
            raise ValueError("test_id must be 1..4")
        if self.n_participants < 1:
            raise ValueError("n_participants must be >= 1")
        if self.time_divisor_s <= 0:
            raise ValueError("time_divisor_s must be positive")


def default_baseline(params: AgentParams) -> AgentParams:
    """Tactile-only parameter set implied by a glove parameter set."""
    plateau = params.t_inf_s * BASELINE_SLOWDOWN
    return replace(
        params,
        t0_s=max(params.t0_s, plateau),
        t_inf_s=plateau,
        p_error=BASELINE_P_ERROR,
    )


def _total_time_s(t: TrialTranscript) -> float:
    return sum(t.per_attempt_times_s)


def _mean(xs: list[float]) -> float:
    return sum(xs) / len(xs)


def _sd(xs: list[float]) -> float:
    if len(xs) < 2:
        return 0.0
    m = _mean(xs)
    return (sum((x - m) ** 2 for x in xs) / (len(xs) - 1)) ** 0.5


def _analyze_learning(cohort: list[TrialTranscript]) -> dict[str, Any]:
    matrix = [list(t.per_attempt_times_s) for t in cohort]
    k = len(matrix[0])
    attempts = list(zip(*matrix))
    block: dict[str, Any] = {
        "attempt_mean_s": [_mean(list(col)) for col in attempts],
        "attempt_sd_s": [_sd(list(col)) for col in attempts],
    }
    first, last = list(attempts[0]), list(attempts[-1])
    block["improvement_percent"] = 100.0 * (_mean(first) - _mean(last)) / _mean(first)
    if len(matrix) >= 3 and k >= 2:
        block["anova_attempts"] = result_to_dict(rm_anova_gg(matrix))
        block["first_vs_last_t"] = result_to_dict(paired_t_test(first, last))
    if len(matrix) >= 4:
        block["last_attempt_normality"] = result_to_dict(normality_jarque_bera(last))
        block["normality_caveat"] = NORMALITY_CAVEAT
    return block


def _analyze_placement(cohort: list[TrialTranscript]) -> dict[str, Any]:
    pairs = [(int(t.aux["correct"]), PLACEMENT_TOTAL) for t in cohort]
    totals = [_total_time_s(t) for t in cohort]
    matrix = [list(t.per_attempt_times_s) for t in cohort]
    block: dict[str, Any] = {
        "success": result_to_dict(success_rate(pairs)),
        "accuracy_mean": _mean([accuracy(c, t.errors) for (c, _), t in zip(pairs, cohort)]),
        "total_time_mean_s": _mean(totals),
        "total_time_sd_s": _sd(totals),
        "time_cv": result_to_dict(cv(totals)),
    }
    if len(cohort) >= 3:
        block["attempt_consistency_alpha"] = result_to_dict(cronbach_alpha(matrix))
    return block


def _analyze_comparison(
    glove: list[TrialTranscript],
    baseline: list[TrialTranscript],
    time_divisor_s: float,
) -> dict[str, Any]:
    def condition_block(cohort: list[TrialTranscript]) -> dict[str, Any]:
        block = _analyze_placement(cohort)
        totals = [_total_time_s(t) for t in cohort]
        cohort_mean = _mean(totals)
        scores = [
            score_test3(
                ScoreInput(
                    correct=int(t.aux["correct"]),
                    errors=t.errors,
                    time_s=total,
                    cohort_mean_time_s=cohort_mean,
                ),
                time_divisor=time_divisor_s,
            )
            for t, total in zip(cohort, totals)
        ]
        block["score_mean"] = _mean(scores)
        block["score_sd"] = _sd(scores)
        return block

    glove_totals = [_total_time_s(t) for t in glove]
    base_totals = [_total_time_s(t) for t in baseline]
    out: dict[str, Any] = {
        "glove": condition_block(glove),
        "tactile_only": condition_block(baseline),
        "time_reduction_percent": 100.0
        * (_mean(base_totals) - _mean(glove_totals))
        / _mean(base_totals),
    }
    if len(glove) >= 2:
        out["paired_t_total_time"] = result_to_dict(
            paired_t_test(glove_totals, base_totals)
        )
    return out


def _analyze_navigation(cohort: list[TrialTranscript]) -> dict[str, Any]:
    scores = [
        score_test4(
            t_total_s=t.aux["tT_s"],
            t_first_s=t.aux["t1_s"],
            n1=int(t.aux["n1"]),
            n2=int(t.aux["n2"]),
        )
        for t in cohort
    ]
    block: dict[str, Any] = {
        "scores": scores,
        "score_mean": _mean(scores),
        "score_sd": _sd(scores),
        "mean_regions_leg1": _mean([t.aux["n1"] for t in cohort]),
        "mean_regions_leg2": _mean([t.aux["n2"] for t in cohort]),
    }
    if len(scores) >= 2:
        block["score_cv"] = result_to_dict(cv(scores))
    if len(scores) >= 4:
        block["score_normality"] = result_to_dict(normality_jarque_bera(scores))
        block["normality_caveat"] = NORMALITY_CAVEAT
    return block


def scene_for(spec: ExperimentSpec) -> Scene:
    return build_setup(spec.test_id, spec.scene_seed)


def run_experiment(spec: ExperimentSpec, cfg: DeviceConfig = DeviceConfig()) -> dict[str, Any]:
    """Run the cohort and assemble the full report dict."""
    scene = scene_for(spec)
    params = replace(spec.params, seed=spec.seed)
    cohort = run_cohort(spec.test_id, spec.n_participants, params, scene, cfg)

    if spec.test_id == 1:
        analysis = _analyze_learning(cohort)
    elif spec.test_id == 2:
        analysis = _analyze_placement(cohort)
    elif spec.test_id == 3:
        base_params = spec.baseline_params or default_baseline(params)
        base_params = replace(base_params, seed=spec.seed)
        baseline = run_baseline_cohort(spec.n_participants, base_params, scene)
        analysis = _analyze_comparison(cohort, baseline, spec.time_divisor_s)
    else:
        analysis = _analyze_navigation(cohort)

    report = {
        "format_version": REPORT_FORMAT_VERSION,
        "spec": {
            "test_id": spec.test_id,
            "n_participants": spec.n_participants,
            "seed": spec.seed,
            "scene_seed": spec.scene_seed,
            "time_divisor_s": spec.time_divisor_s,
            "capacity_mah": spec.capacity_mah,
            "params": _params_dict(params),
            "device": {
                "record_duration_ms": cfg.record_duration_ms,
                "context_timeout_ms": cfg.context_timeout_ms,
                "playback_preemptible": cfg.playback_preemptible,
            },
        },
        "participants": [summary(t) for t in cohort],
        "analysis": analysis,
        "energy": energy_summary(spec.capacity_mah, EnergyProfile()),
    }
    if spec.test_id == 3:
        report["baseline_participants"] = [summary(t) for t in baseline]
        report["spec"]["baseline_params"] = _params_dict(base_params)
    return report


def _params_dict(p: AgentParams) -> dict[str, Any]:
    return {
        "t0_s": p.t0_s,
        "t_inf_s": p.t_inf_s,
        "learn_rate": p.learn_rate,
        "time_sd_s": p.time_sd_s,
        "p_error": p.p_error,
        "seed": p.seed,
    }


def report_to_json_bytes(report: dict[str, Any]) -> bytes:
    """Canonical bytes: sorted keys, 2-space indent, LF, trailing newline."""
    text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def write_report(report: dict[str, Any], path: str | Path) -> None:
    Path(path).write_bytes(report_to_json_bytes(report))
