"""Rank-based tests: Mann-Whitney U, Kruskal-Wallis and Spearman's rho."""

import math
from collections import Counter
from functools import lru_cache
from typing import List, Sequence, Tuple

from .parametric import pearson
from .result import EffectKind, StatsError, TestResult
from .special import chi2_sf, normal_sf

EXACT_MWU_LIMIT = 12


def rank_with_ties(values: Sequence[float]) -> List[float]:
    """Ranks 1..n, with tied values sharing the mean of the ranks they span."""
    if len(values) == 0:
        raise StatsError("Cannot rank an empty sample")
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # positions i..j (0-based) hold ranks i+1..j+1
        shared = (i + j + 2) / 2.0
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def tie_sizes(values: Sequence[float]) -> List[int]:
    """Sizes of the groups of tied values (groups of one included)."""
    return list(Counter(values).values())


def _tie_term(values: Sequence[float]) -> float:
    return float(sum(t ** 3 - t for t in tie_sizes(values)))


@lru_cache(maxsize=None)
def _u_counts(n1: int, n2: int) -> Tuple[int, ...]:
    """Number of orderings giving each U value, for U = 0..n1*n2."""
    if n1 == 0 or n2 == 0:
        return (1,)
    without_largest_a = _u_counts(n1 - 1, n2)
    without_largest_b = _u_counts(n1, n2 - 1)
    counts = [0] * (n1 * n2 + 1)
    # the largest pooled value belongs to a (beats all of b) or to b (beats nothing)
    for u, c in enumerate(without_largest_a):
        counts[u + n2] += c
    for u, c in enumerate(without_largest_b):
        counts[u] += c
    return tuple(counts)


def exact_mwu_p(u: float, n1: int, n2: int) -> float:
    """Two-sided exact p-value for an integer U statistic without ties."""
    counts = _u_counts(n1, n2)
    total = sum(counts)
    u = int(round(u))
    lower = sum(counts[: u + 1])
    upper = sum(counts[u:])
    return min(1.0, 2.0 * min(lower, upper) / total)


def mann_whitney_u(a: Sequence[float], b: Sequence[float], method: str = "auto") -> TestResult:
    """Two-sided Mann-Whitney U test with rank-biserial effect size.

    U1 counts pairs where ``a`` exceeds ``b`` (ties count half) and the
    effect is r = 1 - 2*U1/(n1*n2), so ``a`` entirely below ``b`` gives +1.

    Args:
        a: First sample
        b: Second sample
        method: ``auto`` (exact when both n <= 12 and no ties), ``exact`` or ``asymptotic``
    """
    if len(a) == 0 or len(b) == 0:
        raise StatsError("Mann-Whitney U needs two non-empty samples")
    if method not in ("auto", "exact", "asymptotic"):
        raise StatsError(f"Unknown method {method!r}")
    n1, n2 = len(a), len(b)
    pooled = list(a) + list(b)
    ranks = rank_with_ties(pooled)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0
    effect = 1.0 - 2.0 * u1 / (n1 * n2)

    tie_term = _tie_term(pooled)
    has_ties = tie_term > 0
    use_exact = method == "exact" or (
        method == "auto" and not has_ties and max(n1, n2) <= EXACT_MWU_LIMIT
    )
    if use_exact:
        if has_ties:
            raise StatsError("Exact Mann-Whitney p-values require samples without ties")
        p_value = exact_mwu_p(u1, n1, n2)
        notes = ("exact distribution",)
    else:
        n = n1 + n2
        variance = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
        if variance <= 0:
            p_value = 1.0
            notes = ("all values identical",)
        else:
            z = max(0.0, abs(u1 - n1 * n2 / 2.0) - 0.5) / math.sqrt(variance)
            p_value = min(1.0, 2.0 * normal_sf(z))
            notes = ("normal approximation", "continuity correction")
            if has_ties:
                notes += ("tie-corrected variance",)

    return TestResult(
        test="mann_whitney_u",
        statistic=u1,
        p_value=p_value,
        effect_size=effect,
        effect_kind=EffectKind.RANK_BISERIAL,
        n_values=(n1, n2),
        method_notes=notes,
    )


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> TestResult:
    """Kruskal-Wallis H test with tie correction."""
    groups = [list(g) for g in groups]
    if len(groups) < 2:
        raise StatsError("Kruskal-Wallis needs at least two groups")
    if any(len(g) == 0 for g in groups):
        raise StatsError("Kruskal-Wallis groups must be non-empty")

    pooled = [x for g in groups for x in g]
    n = len(pooled)
    ranks = rank_with_ties(pooled)
    k = len(groups)
    df = k - 1

    h = 0.0
    start = 0
    for g in groups:
        rank_sum = sum(ranks[start:start + len(g)])
        h += rank_sum ** 2 / len(g)
        start += len(g)
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)

    correction = 1.0 - _tie_term(pooled) / (n ** 3 - n) if n > 1 else 0.0
    notes: Tuple[str, ...] = ("chi-square approximation",)
    if correction <= 0:
        return TestResult(
            test="kruskal_wallis", statistic=0.0, p_value=1.0, effect_size=0.0,
            effect_kind=EffectKind.EPSILON_SQUARED, n_values=tuple(len(g) for g in groups),
            df=(df,), method_notes=("all values identical",),
        )
    if correction < 1.0:
        h /= correction
        notes += ("tie correction applied",)
    h = max(0.0, h)

    return TestResult(
        test="kruskal_wallis",
        statistic=h,
        p_value=chi2_sf(h, df),
        effect_size=h / (n - 1) if n > 1 else 0.0,
        effect_kind=EffectKind.EPSILON_SQUARED,
        n_values=tuple(len(g) for g in groups),
        df=(df,),
        method_notes=notes,
    )


def spearman(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Spearman's rho as the Pearson correlation of tie-averaged ranks."""
    if len(x) != len(y):
        raise StatsError("Spearman needs paired samples of equal length")
    if len(x) < 3:
        raise StatsError("Spearman needs at least three pairs")
    result = pearson(rank_with_ties(x), rank_with_ties(y))
    notes = ("pearson on average ranks", "t approximation")
    return TestResult(
        test="spearman",
        statistic=result.statistic,
        p_value=result.p_value,
        effect_size=result.effect_size,
        effect_kind=EffectKind.SPEARMAN_RHO,
        n_values=result.n_values,
        df=result.df,
        method_notes=notes,
    )


def spearman_no_ties(x: Sequence[float], y: Sequence[float]) -> float:
    """Textbook 1 - 6*sum(d^2)/(n(n^2-1)) form, valid only without ties."""
    n = len(x)
    if _tie_term(x) or _tie_term(y):
        raise StatsError("The d-squared shortcut is only valid without ties")
    d2 = sum((rx - ry) ** 2 for rx, ry in zip(rank_with_ties(x), rank_with_ties(y)))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))
