"""Trial scoring and the statistics battery.

Scoring for the placement and navigation trials:

    accuracy        100 * (c - e/3) / 9          nine-move board, guess-corrected
    score_test3     accuracy - (t - t_mean) / divisor   (divisor defaults to 3)
    score_test4     tT / (n1 + n2) + t1 / n1     lower is better

Statistics: paired two-tailed t test, one-way repeated-measures ANOVA
with the Greenhouse-Geisser correction (Box epsilon-hat from the
double-centered condition covariance), Bonferroni-adjusted pairwise
comparisons, Cronbach's alpha, coefficient of variation, and a
Jarque-Bera normality check.  The normality check is a stand-in: the
analyses this mirrors did not name their procedure, and every result
carries that caveat.

Sample statistics use the n-1 denominator throughout.  Tail probabilities
come from :mod:`glovesim.distributions`; nothing here imports an external
statistics package.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from .distributions import chi2_sf_2, f_sf, t_two_tailed_p

NORMALITY_CAVEAT = (
    "Jarque-Bera used as a stand-in; the referenced analysis did not name its normality test"
)


# --- result records ----------------------------------------------------------


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p: float
    mean_diff: float
    n: int


@dataclass(frozen=True)
class AnovaResult:
    f: float
    df1: float
    df2: float
    p: float
    epsilon: float
    n_subjects: int
    k_conditions: int


@dataclass(frozen=True)
class PairwiseResult:
    """Bonferroni-adjusted paired comparisons across k conditions."""

    adjusted_p: tuple[tuple[float | None, ...], ...]
    m_comparisons: int


@dataclass(frozen=True)
class AlphaResult:
    alpha: float
    k_items: int
    n_subjects: int


@dataclass(frozen=True)
class CvResult:
    cv: float
    mean: float
    sd: float
    n: int


@dataclass(frozen=True)
class SuccessRateResult:
    task_rate_percent: float
    mean_rate_percent: float
    n_subjects: int


@dataclass(frozen=True)
class NormalityResult:
    statistic: float
    p: float
    method: str = "jarque-bera"
    caveat: str = NORMALITY_CAVEAT


@dataclass(frozen=True)
class ScoreInput:
    """One subject's placement trial: moves, errors, elapsed time."""

    correct: int
    errors: int
    time_s: float
    cohort_mean_time_s: float


def result_to_dict(result: Any) -> dict[str, Any]:
    """JSON-ready dict for any result record, tagged with its kind."""
    out = {"kind": type(result).__name__}
    for f in dataclasses.fields(result):
        value = getattr(result, f.name)
        if isinstance(value, tuple):
            value = [list(row) if isinstance(row, tuple) else row for row in value]
        out[f.name] = value
    return out


# --- scoring -----------------------------------------------------------------


def accuracy(correct: int, errors: int) -> float:
    """Placement accuracy in percent over a nine-move board.

    Errors are discounted at a third; a perfect board scores 100 and the
    result may be negative (it is not clamped).
    """
    if not isinstance(correct, int) or not isinstance(errors, int):
        raise TypeError("correct and errors must be integers")
    if correct < 0 or errors < 0:
        raise ValueError("correct and errors must be >= 0")
    if correct > 9:
        raise ValueError("correct cannot exceed 9")
    return 100.0 * (correct - errors / 3.0) / 9.0


def score_test3(inp: ScoreInput, time_divisor: float = 3.0) -> float:
    """Accuracy with a time bonus/penalty around the cohort mean."""
    if time_divisor <= 0:
        raise ValueError("time_divisor must be positive")
    return accuracy(inp.correct, inp.errors) - (inp.time_s - inp.cohort_mean_time_s) / time_divisor


def score_test4(t_total_s: float, t_first_s: float, n1: int, n2: int) -> float:
    """Navigation score: time per tag touched plus time per tag to the find."""
    if n1 < 1 or n2 < 1:
        raise ValueError("n1 and n2 must be >= 1")
    if t_total_s < 0 or t_first_s < 0:
        raise ValueError("times must be >= 0")
    return t_total_s / (n1 + n2) + t_first_s / n1


def success_rate(pairs: Sequence[tuple[int, int]]) -> SuccessRateResult:
    """Task-level and mean per-subject success rates, in percent.

    ``pairs`` holds (done, attempted) per subject.  The task rate counts
    subjects who finished everything; the mean rate averages per-subject
    fractions.
    """
    if not pairs:
        raise ValueError("success_rate needs at least one subject")
    for done, attempted in pairs:
        if attempted <= 0:
            raise ValueError("attempted must be positive")
        if not 0 <= done <= attempted:
            raise ValueError("done must be within [0, attempted]")
    n = len(pairs)
    task = sum(1 for done, attempted in pairs if done == attempted) / n
    mean = sum(done / attempted for done, attempted in pairs) / n
    return SuccessRateResult(
        task_rate_percent=100.0 * task, mean_rate_percent=100.0 * mean, n_subjects=n
    )


# --- helpers -----------------------------------------------------------------


def _mean(xs: Sequence[float]) -> float:
    return sum(xs) / len(xs)


def _sample_var(xs: Sequence[float]) -> float:
    m = _mean(xs)
    return sum((x - m) ** 2 for x in xs) / (len(xs) - 1)


def _as_matrix(data: Sequence[Sequence[float]], min_rows: int, min_cols: int) -> list[list[float]]:
    rows = [list(map(float, row)) for row in data]
    if len(rows) < min_rows:
        raise ValueError(f"need at least {min_rows} subjects, got {len(rows)}")
    k = len(rows[0]) if rows else 0
    if k < min_cols:
        raise ValueError(f"need at least {min_cols} columns, got {k}")
    if any(len(row) != k for row in rows):
        raise ValueError("all rows must have the same length")
    return rows


# --- inferential tests -------------------------------------------------------


def paired_t_test(x: Sequence[float], y: Sequence[float]) -> TTestResult:
    """Two-tailed paired t test.

    Identical samples give t = 0, p = 1.  A constant nonzero difference
    has no finite t and raises.
    """
    if len(x) != len(y):
        raise ValueError("paired samples must have equal length")
    n = len(x)
    if n < 2:
        raise ValueError("need at least two pairs")
    diffs = [float(a) - float(b) for a, b in zip(x, y)]
    mean_d = _mean(diffs)
    var_d = _sample_var(diffs)
    df = n - 1
    if var_d == 0.0:
        if mean_d == 0.0:
            return TTestResult(t=0.0, df=df, p=1.0, mean_diff=0.0, n=n)
        raise ValueError("differences have zero variance; t is undefined")
    t = mean_d / math.sqrt(var_d / n)
    return TTestResult(t=t, df=df, p=t_two_tailed_p(t, df), mean_diff=mean_d, n=n)


def rm_anova_gg(data: Sequence[Sequence[float]]) -> AnovaResult:
    """One-way repeated-measures ANOVA with the Greenhouse-Geisser correction.

    ``data`` is subjects x conditions.  The F statistic is the usual
    within-subjects ratio; both degrees of freedom are scaled by Box's
    epsilon-hat estimated from the double-centered condition covariance,
    so df2/df1 always equals n - 1.

    Raises:
        ValueError: ragged input, too small, or no within-subject error
            variance (identical columns are degenerate here).
    """
    rows = _as_matrix(data, min_rows=2, min_cols=2)
    n = len(rows)
    k = len(rows[0])

    grand = _mean([x for row in rows for x in row])
    col_means = [_mean([row[j] for row in rows]) for j in range(k)]
    row_means = [_mean(row) for row in rows]

    ss_cond = n * sum((m - grand) ** 2 for m in col_means)
    ss_error = sum(
        (rows[i][j] - col_means[j] - row_means[i] + grand) ** 2
        for i in range(n)
        for j in range(k)
    )
    df_cond = k - 1
    df_error = (k - 1) * (n - 1)
    ms_cond = ss_cond / df_cond
    ms_error = ss_error / df_error
    if ms_error <= 0.0 or math.isclose(ms_error, 0.0, abs_tol=1e-30):
        raise ValueError("no within-subject error variance; F is degenerate")
    f = ms_cond / ms_error

    epsilon = _gg_epsilon(rows, col_means, n, k)
    df1 = epsilon * df_cond
    df2 = epsilon * df_error
    return AnovaResult(
        f=f,
        df1=df1,
        df2=df2,
        p=f_sf(f, df1, df2),
        epsilon=epsilon,
        n_subjects=n,
        k_conditions=k,
    )


def _gg_epsilon(rows: list[list[float]], col_means: list[float], n: int, k: int) -> float:
    """Box's epsilon-hat from the double-centered covariance of conditions."""
    cov = [
        [
            sum((rows[i][a] - col_means[a]) * (rows[i][b] - col_means[b]) for i in range(n))
            / (n - 1)
            for b in range(k)
        ]
        for a in range(k)
    ]
    row_avg = [_mean(row) for row in cov]
    total_avg = _mean(row_avg)
    centered = [
        [cov[a][b] - row_avg[a] - row_avg[b] + total_avg for b in range(k)]
        for a in range(k)
    ]
    trace = sum(centered[a][a] for a in range(k))
    sum_sq = sum(centered[a][b] ** 2 for a in range(k) for b in range(k))
    if sum_sq <= 0.0:
        raise ValueError("degenerate condition covariance; epsilon is undefined")
    epsilon = trace * trace / ((k - 1) * sum_sq)
    return min(1.0, max(1.0 / (k - 1), epsilon))


def bonferroni_pairwise(data: Sequence[Sequence[float]]) -> PairwiseResult:
    """All pairwise paired t tests with Bonferroni adjustment (capped at 1)."""
    rows = _as_matrix(data, min_rows=2, min_cols=2)
    k = len(rows[0])
    m = k * (k - 1) // 2
    table: list[list[float | None]] = [[None] * k for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            res = paired_t_test([row[a] for row in rows], [row[b] for row in rows])
            adj = min(1.0, res.p * m)
            table[a][b] = adj
            table[b][a] = adj
    return PairwiseResult(
        adjusted_p=tuple(tuple(row) for row in table), m_comparisons=m
    )


def cronbach_alpha(items: Sequence[Sequence[float]]) -> AlphaResult:
    """Internal-consistency alpha over subjects x items.

    Raises:
        ValueError: fewer than two items/subjects, or zero total variance.
    """
    rows = _as_matrix(items, min_rows=2, min_cols=2)
    n = len(rows)
    k = len(rows[0])
    item_vars = [_sample_var([row[j] for row in rows]) for j in range(k)]
    totals = [sum(row) for row in rows]
    total_var = _sample_var(totals)
    if total_var == 0.0:
        raise ValueError("total score has zero variance; alpha is undefined")
    alpha = (k / (k - 1)) * (1.0 - sum(item_vars) / total_var)
    return AlphaResult(alpha=alpha, k_items=k, n_subjects=n)


def cv(values: Sequence[float]) -> CvResult:
    """Coefficient of variation: sample sd over mean."""
    xs = [float(v) for v in values]
    if len(xs) < 2:
        raise ValueError("need at least two values")
    mean = _mean(xs)
    if mean == 0.0:
        raise ValueError("mean is zero; cv is undefined")
    sd = math.sqrt(_sample_var(xs))
    return CvResult(cv=sd / mean, mean=mean, sd=sd, n=len(xs))


def normality_jarque_bera(values: Sequence[float]) -> NormalityResult:
    """Jarque-Bera omnibus normality check (flagged stand-in, see caveat)."""
    xs = [float(v) for v in values]
    n = len(xs)
    if n < 4:
        raise ValueError("need at least four values")
    mean = _mean(xs)
    m2 = sum((x - mean) ** 2 for x in xs) / n
    if m2 == 0.0:
        raise ValueError("values have zero variance")
    m3 = sum((x - mean) ** 3 for x in xs) / n
    m4 = sum((x - mean) ** 4 for x in xs) / n
    skew = m3 / m2**1.5
    kurt = m4 / m2**2
    jb = n * (skew**2 / 6.0 + (kurt - 3.0) ** 2 / 24.0)
    return NormalityResult(statistic=jb, p=chi2_sf_2(jb))


# --- CSV ingestion -----------------------------------------------------------


def read_matrix_csv(path: Path | str) -> tuple[list[str], list[list[float]]]:
    """Read a numeric matrix CSV: header row, then one subject per row.

    Raises:
        ValueError: empty file, ragged rows, or non-numeric cells; errors
            name the offending 1-based row.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("empty CSV: missing header row") from None
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"row {lineno}: expected {len(header)} cells, got {len(row)}"
                )
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                raise ValueError(f"row {lineno}: non-numeric cell") from None
    if not rows:
        raise ValueError("CSV has a header but no data rows")
    return header, rows
