"""Correlation, ANOVA and standardized mean differences."""

import math
from typing import Sequence

from .result import EffectKind, StatsError, TestResult
from .special import f_sf, t_two_sided_p

_RELATIVE_SS_TOL = 1e-20


def pearson(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Pearson correlation with a two-sided t-test p-value (df = n - 2)."""
    n = len(x)
    if n != len(y):
        raise StatsError("Correlation needs paired samples of equal length")
    if n < 3:
        raise StatsError("Correlation needs at least three pairs")
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    sxx = math.fsum((v - mean_x) ** 2 for v in x)
    syy = math.fsum((v - mean_y) ** 2 for v in y)
    if sxx == 0 or syy == 0:
        raise StatsError("Correlation is undefined for a constant input (zero variance)")
    sxy = math.fsum((a - mean_x) * (b - mean_y) for a, b in zip(x, y))
    r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))

    df = n - 2
    if abs(r) == 1.0:
        p_value = 0.0
    else:
        t = r * math.sqrt(df / (1.0 - r * r))
        p_value = t_two_sided_p(t, df)

    return TestResult(
        test="pearson",
        statistic=r,
        p_value=p_value,
        effect_size=r,
        effect_kind=EffectKind.PEARSON_R,
        n_values=(n,),
        df=(df,),
        method_notes=("t approximation",),
    )


def point_biserial(values: Sequence[float], flags: Sequence[int]) -> TestResult:
    """Correlation between a score and a binary indicator (STOP = 1, PLAY = 0)."""
    if len(values) != len(flags):
        raise StatsError("Point-biserial needs one flag per value")
    coded = [1.0 if f else 0.0 for f in flags]
    if len(set(coded)) < 2:
        raise StatsError("Point-biserial needs both flag classes present")
    result = pearson(values, coded)
    ones = int(sum(coded))
    return TestResult(
        test="point_biserial",
        statistic=result.statistic,
        p_value=result.p_value,
        effect_size=result.effect_size,
        effect_kind=EffectKind.POINT_BISERIAL,
        n_values=(len(coded) - ones, ones),
        df=result.df,
        method_notes=result.method_notes,
    )


def _f_test(
    means: Sequence[float], ns: Sequence[int], ss_within: float, test: str
) -> TestResult:
    k = len(means)
    n_total = sum(ns)
    grand_mean = math.fsum(m * n for m, n in zip(means, ns)) / n_total
    ss_between = math.fsum(n * (m - grand_mean) ** 2 for m, n in zip(means, ns))
    df_between = k - 1
    df_within = n_total - k
    if df_within < 1:
        raise StatsError("ANOVA needs more observations than groups")

    # sums of squares this small relative to the data are rounding residue
    tolerance = _RELATIVE_SS_TOL * (math.fsum(n * m * m for m, n in zip(means, ns)) + ss_within)
    notes = ()
    if ss_within <= tolerance:
        if ss_between <= tolerance:
            f_stat, p_value = 0.0, 1.0
            notes = ("no variance in any group",)
        else:
            f_stat, p_value = math.inf, 0.0
            notes = ("zero within-group variance with unequal means; p reported as 0",)
    else:
        f_stat = (ss_between / df_between) / (ss_within / df_within)
        p_value = f_sf(f_stat, df_between, df_within)
    total = ss_between + ss_within
    return TestResult(
        test=test,
        statistic=f_stat,
        p_value=p_value,
        effect_size=ss_between / total if ss_between > tolerance else 0.0,
        effect_kind=EffectKind.ETA_SQUARED,
        n_values=tuple(ns),
        df=(df_between, df_within),
        method_notes=notes,
    )


def one_way_anova(groups: Sequence[Sequence[float]]) -> TestResult:
    """One-way ANOVA on raw observations."""
    groups = [list(g) for g in groups]
    if len(groups) < 2:
        raise StatsError("ANOVA needs at least two groups")
    if any(len(g) == 0 for g in groups):
        raise StatsError("ANOVA groups must be non-empty")
    means = [math.fsum(g) / len(g) for g in groups]
    ss_within = math.fsum((x - m) ** 2 for g, m in zip(groups, means) for x in g)
    return _f_test(means, [len(g) for g in groups], ss_within, "one_way_anova")


def anova_from_summary(
    means: Sequence[float], sds: Sequence[float], ns: Sequence[int]
) -> TestResult:
    """One-way ANOVA rebuilt from per-group means, sample SDs and sizes."""
    if not len(means) == len(sds) == len(ns):
        raise StatsError("means, sds and ns must have the same length")
    if len(means) < 2:
        raise StatsError("ANOVA needs at least two groups")
    if any(n < 2 for n in ns):
        raise StatsError("Each group needs at least two observations")
    if any(sd < 0 for sd in sds):
        raise StatsError("Standard deviations must be non-negative")
    ss_within = math.fsum((n - 1) * sd ** 2 for sd, n in zip(sds, ns))
    return _f_test(list(means), list(ns), ss_within, "anova_from_summary")


def cohens_d_avgvar(mean_1: float, sd_1: float, mean_2: float, sd_2: float) -> float:
    """Cohen's d with the unweighted average of the two variances as denominator."""
    if sd_1 < 0 or sd_2 < 0:
        raise StatsError("Standard deviations must be non-negative")
    if sd_1 == 0 and sd_2 == 0:
        raise StatsError("Cohen's d is undefined when both standard deviations are 0")
    return abs(mean_2 - mean_1) / math.sqrt((sd_1 ** 2 + sd_2 ** 2) / 2.0)
