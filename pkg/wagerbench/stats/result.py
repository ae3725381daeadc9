"""Test result container, multiple-comparison helpers and effect labels."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

P_DISPLAY_FLOOR = 2.2e-16


class StatsError(ValueError):
    """Raised when a test is undefined for its inputs."""


class EffectKind(str, Enum):
    RANK_BISERIAL = "rank_biserial"
    COHENS_D = "cohens_d"
    CRAMERS_V = "cramers_v"
    SPEARMAN_RHO = "spearman_rho"
    POINT_BISERIAL = "point_biserial"
    PEARSON_R = "pearson_r"
    ETA_SQUARED = "eta_squared"
    EPSILON_SQUARED = "epsilon_squared"


_CORRELATION_KINDS = {
    EffectKind.RANK_BISERIAL,
    EffectKind.SPEARMAN_RHO,
    EffectKind.POINT_BISERIAL,
    EffectKind.PEARSON_R,
}


@dataclass(frozen=True)
class TestResult:
    """Outcome of one statistical test."""
    __test__ = False  # keep pytest from collecting this class

    test: str
    statistic: float
    p_value: float
    effect_size: Optional[float]
    effect_kind: Optional[EffectKind]
    n_values: Tuple[int, ...]
    df: Optional[Tuple[float, ...]] = None
    method_notes: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if math.isnan(self.p_value):
            raise StatsError(f"{self.test}: p-value is NaN")
        # clip floating-point excursions such as 1.0000000000000002
        object.__setattr__(self, "p_value", min(1.0, max(0.0, self.p_value)))
        if self.effect_size is not None and self.effect_kind in _CORRELATION_KINDS:
            object.__setattr__(self, "effect_size", min(1.0, max(-1.0, self.effect_size)))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "method_notes", tuple(self.method_notes))
        if self.df is not None:
            object.__setattr__(self, "df", tuple(self.df))

    def is_significant(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha

    def to_dict(self) -> Dict[str, Any]:
        return {
            "test": self.test,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "effect_size": self.effect_size,
            "effect_kind": self.effect_kind.value if self.effect_kind else None,
            "n_values": list(self.n_values),
            "df": list(self.df) if self.df is not None else None,
            "method_notes": list(self.method_notes),
        }


def bonferroni_adjust(p: float, m: int) -> float:
    """Bonferroni-adjusted p-value, capped at 1."""
    if m < 1:
        raise StatsError(f"Number of comparisons must be >= 1, got {m}")
    return min(1.0, m * p)


def bonferroni_threshold(alpha: float, m: int) -> float:
    """Per-comparison significance threshold."""
    if m < 1:
        raise StatsError(f"Number of comparisons must be >= 1, got {m}")
    return alpha / m


def format_p(p: Optional[float]) -> str:
    """Human-readable p-value with the conventional display floor."""
    if p is None:
        return "n/a"
    if p < P_DISPLAY_FLOOR:
        return "p < 2.2e-16"
    if p < 0.001:
        return f"p = {p:.2e}"
    return f"p = {p:.4f}"


def interpret_effect(kind: EffectKind, value: Optional[float], k: Optional[int] = None) -> str:
    """Conventional magnitude label for an effect size.

    Args:
        kind: Which effect size ``value`` is
        value: The effect size
        k: min(rows - 1, cols - 1) of the table, for Cramer's V
    """
    if value is None or math.isnan(value):
        return "undefined"
    magnitude = abs(value)
    kind = EffectKind(kind)
    if kind == EffectKind.COHENS_D:
        cuts = ((1.2, "very large"), (0.8, "large"), (0.5, "medium"), (0.2, "small"))
    elif kind == EffectKind.CRAMERS_V:
        scale = 1.0 / math.sqrt(k or 1)
        cuts = ((0.5 * scale, "large"), (0.3 * scale, "medium"), (0.1 * scale, "small"))
    elif kind in (EffectKind.ETA_SQUARED, EffectKind.EPSILON_SQUARED):
        cuts = ((0.14, "large"), (0.06, "medium"), (0.01, "small"))
    else:
        cuts = ((0.5, "large"), (0.3, "medium"), (0.1, "small"))
    for threshold, label in cuts:
        if magnitude >= threshold:
            return label
    return "negligible"
