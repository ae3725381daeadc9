"""Statistical tests, effect sizes and distribution functions."""

from .categorical import chi_square_independence, cramers_v
from .descriptive import Descriptives, describe
from .nonparametric import (
    kruskal_wallis,
    mann_whitney_u,
    rank_with_ties,
    spearman,
    spearman_no_ties,
)
from .parametric import (
    anova_from_summary,
    cohens_d_avgvar,
    one_way_anova,
    pearson,
    point_biserial,
)
from .result import (
    EffectKind,
    StatsError,
    TestResult,
    bonferroni_adjust,
    bonferroni_threshold,
    format_p,
    interpret_effect,
)
from .special import DistKind, dist_cdf, dist_sf

__all__ = [
    "DistKind",
    "Descriptives",
    "EffectKind",
    "StatsError",
    "TestResult",
    "anova_from_summary",
    "bonferroni_adjust",
    "bonferroni_threshold",
    "chi_square_independence",
    "cohens_d_avgvar",
    "cramers_v",
    "describe",
    "dist_cdf",
    "dist_sf",
    "format_p",
    "interpret_effect",
    "kruskal_wallis",
    "mann_whitney_u",
    "one_way_anova",
    "pearson",
    "point_biserial",
    "rank_with_ties",
    "spearman",
    "spearman_no_ties",
]
