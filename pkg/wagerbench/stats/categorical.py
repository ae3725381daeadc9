"""Chi-square test of independence with Cramer's V."""

import math
from typing import Sequence

from .result import EffectKind, StatsError, TestResult
from .special import chi2_sf


def cramers_v(chi_square: float, n_total: float, n_rows: int, n_cols: int) -> float:
    k = min(n_rows - 1, n_cols - 1)
    if k < 1 or n_total <= 0:
        raise StatsError("Cramer's V needs at least a 2x2 table with a positive total")
    return math.sqrt(chi_square / (n_total * k))


def chi_square_independence(table: Sequence[Sequence[float]]) -> TestResult:
    """Pearson chi-square test on an r x c contingency table (no Yates correction).

    Rows or columns that sum to zero are dropped before testing.
    """
    rows = [list(map(float, row)) for row in table]
    if not rows or any(len(row) != len(rows[0]) for row in rows):
        raise StatsError("Contingency table must be rectangular")
    if any(c < 0 for row in rows for c in row):
        raise StatsError("Counts must be non-negative")

    notes = []
    kept_rows = [row for row in rows if sum(row) > 0]
    if len(kept_rows) < len(rows):
        notes.append(f"dropped {len(rows) - len(kept_rows)} empty row(s)")
    col_totals = [sum(col) for col in zip(*kept_rows)] if kept_rows else []
    keep_cols = [j for j, total in enumerate(col_totals) if total > 0]
    if len(keep_cols) < len(col_totals):
        notes.append(f"dropped {len(col_totals) - len(keep_cols)} empty column(s)")
    kept = [[row[j] for j in keep_cols] for row in kept_rows]

    n_rows = len(kept)
    n_cols = len(keep_cols)
    if n_rows < 2 or n_cols < 2:
        raise StatsError("Degenerate table: need at least two non-empty rows and columns")

    n_total = sum(sum(row) for row in kept)
    row_totals = [sum(row) for row in kept]
    col_totals = [sum(col) for col in zip(*kept)]
    chi_square = 0.0
    for i, row in enumerate(kept):
        for j, observed in enumerate(row):
            expected = row_totals[i] * col_totals[j] / n_total
            chi_square += (observed - expected) ** 2 / expected
    df = (n_rows - 1) * (n_cols - 1)

    return TestResult(
        test="chi_square_independence",
        statistic=chi_square,
        p_value=chi2_sf(chi_square, df),
        effect_size=min(1.0, cramers_v(chi_square, n_total, n_rows, n_cols)),
        effect_kind=EffectKind.CRAMERS_V,
        n_values=(int(n_total),),
        df=(df,),
        method_notes=tuple(notes),
    )
