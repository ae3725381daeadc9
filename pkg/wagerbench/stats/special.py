"""Special functions and distribution CDFs behind the p-values.

The incomplete gamma and beta functions follow the classic series and
continued-fraction evaluations (modified Lentz), switching representation at
the point where each converges fastest.
"""

import math
from enum import Enum

from .result import StatsError

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10000


class DistKind(str, Enum):
    NORMAL = "normal"
    CHI_SQUARE = "chi_square"
    STUDENT_T = "student_t"
    F = "f"


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def _gamma_series(a: float, x: float) -> float:
    """Lower regularized gamma P(a, x) by its power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_continued_fraction(a: float, x: float) -> float:
    """Upper regularized gamma Q(a, x) by Lentz's continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_p(a: float, x: float) -> float:
    if a <= 0:
        raise StatsError(f"Gamma shape must be positive, got {a}")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_continued_fraction(a, x))


def regularized_gamma_q(a: float, x: float) -> float:
    if a <= 0:
        raise StatsError(f"Gamma shape must be positive, got {a}")
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_continued_fraction(a, x))


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def regularized_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise StatsError(f"Beta parameters must be positive, got a={a}, b={b}")
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, front * _beta_continued_fraction(a, b, x) / a)
    return max(0.0, 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b)


def _check_df(*dfs: float) -> None:
    for df in dfs:
        if df is None or not df > 0 or math.isinf(df):
            raise StatsError(f"Degrees of freedom must be positive and finite, got {df}")


def chi2_sf(x: float, df: float) -> float:
    _check_df(df)
    return regularized_gamma_q(df / 2.0, x / 2.0)


def t_two_sided_p(t: float, df: float) -> float:
    """Two-sided p-value of a t statistic."""
    _check_df(df)
    if math.isinf(t):
        return 0.0
    return regularized_beta(df / 2.0, 0.5, df / (df + t * t))


def f_sf(x: float, df1: float, df2: float) -> float:
    _check_df(df1, df2)
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return regularized_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * x))


def dist_cdf(kind: DistKind, x: float, *params: float) -> float:
    """Cumulative distribution function.

    Args:
        kind: Distribution family
        x: Evaluation point
        params: ``df`` for chi-square and t, ``(df1, df2)`` for F, nothing for normal
    """
    kind = DistKind(kind)
    if kind == DistKind.NORMAL:
        return normal_cdf(x)
    if kind == DistKind.CHI_SQUARE:
        (df,) = _params(kind, params, 1)
        _check_df(df)
        return regularized_gamma_p(df / 2.0, x / 2.0)
    if kind == DistKind.STUDENT_T:
        (df,) = _params(kind, params, 1)
        _check_df(df)
        if x == 0:
            return 0.5
        tail = 0.5 * t_two_sided_p(x, df)
        return 1.0 - tail if x > 0 else tail
    df1, df2 = _params(kind, params, 2)
    _check_df(df1, df2)
    if x <= 0:
        return 0.0
    return regularized_beta(df1 / 2.0, df2 / 2.0, df1 * x / (df1 * x + df2))


def dist_sf(kind: DistKind, x: float, *params: float) -> float:
    """Survival function, evaluated directly so tiny upper tails keep precision."""
    kind = DistKind(kind)
    if kind == DistKind.NORMAL:
        return normal_sf(x)
    if kind == DistKind.CHI_SQUARE:
        (df,) = _params(kind, params, 1)
        return chi2_sf(x, df)
    if kind == DistKind.STUDENT_T:
        (df,) = _params(kind, params, 1)
        return dist_cdf(kind, -x, df)
    df1, df2 = _params(kind, params, 2)
    return f_sf(x, df1, df2)


def _params(kind: DistKind, params, expected: int):
    if len(params) != expected:
        raise StatsError(f"{kind.value} takes {expected} parameter(s), got {len(params)}")
    return params
