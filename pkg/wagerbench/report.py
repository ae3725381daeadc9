"""Report emission: JSON, per-table CSVs, plot-ready CSVs and a Markdown summary."""

import json
import math
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Set

import pandas as pd

from .display import console
from .metrics import AnalysisReport, SbiReport
from .metrics.sbi import COMPONENTS
from .stats import Descriptives, EffectKind, TestResult, format_p, interpret_effect

FORMATS = ("json", "csv", "md")

_DESCRIPTIVE_COLUMNS = ("n", "mean", "median", "sd", "minimum", "q1", "q3", "maximum")


def resolve_formats(fmt: str) -> Set[str]:
    """Expand a ``--format`` value (json, csv, md or all) into the formats to write."""
    fmt = fmt.strip().lower()
    if fmt == "all":
        return set(FORMATS)
    if fmt not in FORMATS:
        raise ValueError(f"Unknown format {fmt!r} (expected one of: json, csv, md, all)")
    return {fmt}


def finite_or_none(obj: Any) -> Any:
    """Replace NaN and infinities with None throughout a JSON-ready structure."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: finite_or_none(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [finite_or_none(v) for v in obj]
    return obj


def report_document(analysis: AnalysisReport, sbi: Optional[SbiReport]) -> Dict[str, Any]:
    return finite_or_none({
        "analysis": analysis.to_dict(),
        "sbi": sbi.to_dict() if sbi is not None else None,
    })


def _describe_rows(key: str, stats: Dict[str, Descriptives], **extra) -> List[Dict[str, Any]]:
    rows = []
    for name, d in stats.items():
        row = {key: name, **extra}
        row.update({column: getattr(d, column) for column in _DESCRIPTIVE_COLUMNS})
        rows.append(row)
    return rows


def _test_row(section: str, result: TestResult, **extra) -> Dict[str, Any]:
    return {
        "section": section,
        **extra,
        "test": result.test,
        "statistic": result.statistic,
        "df": ";".join(f"{v:g}" for v in result.df) if result.df else "",
        "p_value": result.p_value,
        "effect_size": result.effect_size,
        "effect_kind": result.effect_kind.value if result.effect_kind else "",
        "n": ";".join(str(n) for n in result.n_values),
        "notes": "; ".join(result.method_notes),
    }


def _pairwise_rows(section: str, comparisons) -> List[Dict[str, Any]]:
    return [
        _test_row(
            section, c.result, group_a=c.group_a, group_b=c.group_b,
            alpha=c.alpha, significant=c.significant, magnitude=c.magnitude,
        )
        for c in comparisons
    ]


def _split_condition(condition_id: str) -> Dict[str, str]:
    persona, machine = condition_id.split("__", 1)
    return {"condition_id": condition_id, "persona": persona, "machine_kind": machine}


def analysis_tables(analysis: AnalysisReport) -> Dict[str, pd.DataFrame]:
    """Per-table frames, keyed by CSV file stem."""
    tables: Dict[str, List[Dict[str, Any]]] = {}
    tests: List[Dict[str, Any]] = []

    lengths = analysis.session_length_table
    if lengths is not None:
        tables["session_length"] = _describe_rows("persona", lengths.by_persona)
        tables["session_length_pairwise"] = _pairwise_rows("session_length", lengths.pairwise)
        tests.append(_test_row("session_length", lengths.kruskal))

    for name, table in analysis.score_tables.items():
        tables[f"score_{name}"] = _describe_rows("persona", table.by_persona)
        tables.setdefault("score_pairwise_d", []).extend(
            {"field": name, "group_a": c.group_a, "group_b": c.group_b,
             "cohens_d": c.cohens_d, "magnitude": c.magnitude, "note": c.note or ""}
            for c in table.pairwise_d
        )
        tests.append(_test_row(f"score_{name}", table.anova))
        tests.append(_test_row(f"score_{name}", table.kruskal))

    bet = analysis.bet_table
    if bet is not None:
        tables["bet"] = [
            {**row, "stake_fraction": bet.stake_fraction.get(row["persona"])}
            for row in _describe_rows("persona", bet.by_persona)
        ]
        tables["bet_pairwise_mwu"] = _pairwise_rows("bet", bet.pairwise_mwu)
        tests.append(_test_row("bet", bet.anova))
        tests.append(_test_row("bet", bet.kruskal))

    if analysis.stop_predictor_table is not None:
        tables["stop_predictors"] = [
            {
                "field": p.field,
                "play_mean": p.play_mean,
                "stop_mean": p.stop_mean,
                "point_biserial": p.point_biserial.effect_size,
                "point_biserial_p": p.point_biserial.p_value,
                "mwu_u": p.mwu.statistic,
                "mwu_r": p.mwu.effect_size,
                "mwu_p": p.mwu.p_value,
            }
            for p in analysis.stop_predictor_table
        ]

    emotion = analysis.emotion_strategy
    if emotion is not None:
        tables["emotion_strategy"] = [
            {"emotional_state": e, **row} for e, row in emotion.counts.items()
        ]
        tables["emotion_strategy_strata"] = [
            {
                "persona": s.persona,
                "machine_kind": s.machine_kind,
                "incoherent_count": s.incoherent_count,
                "chi_square": s.chi_square.statistic if s.chi_square else None,
                "p_value": s.chi_square.p_value if s.chi_square else None,
                "cramers_v": s.chi_square.effect_size if s.chi_square else None,
                "note": s.note or "",
            }
            for s in emotion.strata
        ]
        tests.append(_test_row("emotion_strategy", emotion.chi_square))

    if analysis.risk_bet_correlations is not None:
        tables["risk_bet"] = [
            {
                "group": row.group,
                "n": row.n,
                "rho": row.rho,
                "p_value": row.result.p_value if row.result else None,
                "note": row.note or "",
            }
            for row in analysis.risk_bet_correlations
        ]

    fairness = analysis.fairness_table
    if fairness is not None:
        tables["fairness"] = [
            {
                **row,
                **{
                    f"share_{j}": s
                    for j, s in fairness.judgment_shares[row["machine_kind"]].items()
                },
            }
            for row in _describe_rows("machine_kind", fairness.by_machine)
        ]
        tables["fairness_pairwise"] = _pairwise_rows("fairness", fairness.pairwise)
        tests.append(_test_row("fairness", fairness.anova))

    if analysis.learning_curves is not None:
        tables["learning_rho"] = [
            {
                "persona": c.persona,
                "rho_round_risk": c.rho,
                "p_value": c.result.p_value if c.result else None,
                "note": c.note or "",
            }
            for c in analysis.learning_curves
        ]

    if analysis.streak_table is not None:
        tables["streak"] = [vars(cell).copy() for cell in analysis.streak_table]

    if analysis.session_outcomes is not None:
        rows = []
        for cell in analysis.session_outcomes:
            row = {**_split_condition(cell.condition_id), "sessions": cell.sessions,
                   "win_rate_undefined": cell.win_rate_undefined}
            row.update({f"win_rate_{c}": getattr(cell.win_rate, c) for c in _DESCRIPTIVE_COLUMNS})
            row.update({f"roi_{c}": getattr(cell.roi, c) for c in _DESCRIPTIVE_COLUMNS})
            rows.append(row)
        tables["session_outcomes"] = rows

    if tests:
        tables["tests"] = tests
    return {name: pd.DataFrame(rows) for name, rows in tables.items()}


def plot_tables(analysis: AnalysisReport, sbi: Optional[SbiReport]) -> Dict[str, pd.DataFrame]:
    """Long-format data behind each figure, one row per plotted point."""
    plots: Dict[str, List[Dict[str, Any]]] = {}

    lengths = analysis.session_length_table
    if lengths is not None:
        plots["session_length_by_condition"] = [
            {**_split_condition(cid), **{c: getattr(d, c) for c in _DESCRIPTIVE_COLUMNS}}
            for cid, d in lengths.by_condition.items()
        ]
        plots["net_profit_by_condition"] = [
            {**_split_condition(cid), **{c: getattr(d, c) for c in _DESCRIPTIVE_COLUMNS}}
            for cid, d in lengths.net_profit_by_condition.items()
        ]

    risk = analysis.score_tables.get("risk_score")
    if risk is not None:
        plots["risk_by_persona"] = _describe_rows("persona", risk.by_persona)

    if analysis.psych_profile is not None:
        plots["psych_profile"] = [
            {"persona": persona, "field": name, "mean": value}
            for persona, means in analysis.psych_profile.items()
            for name, value in means.items()
        ]

    if analysis.bet_table is not None:
        plots["stake_fraction_by_condition"] = [
            {**_split_condition(cid), "stake_fraction": value}
            for cid, value in analysis.bet_table.stake_fraction_by_condition.items()
        ]

    if analysis.label_distributions is not None:
        shares = (("emotional_state", "emotion_shares"), ("strategy_mode", "strategy_shares"))
        for column, stem in shares:
            plots[stem] = [
                {"persona": persona, column: label, "share": share}
                for persona, entry in analysis.label_distributions.items()
                for label, share in entry[column].items()
            ]

    if analysis.emotion_strategy is not None:
        plots["emotion_strategy_heatmap"] = [
            {"emotional_state": e, "strategy_mode": s, "count": count}
            for e, row in analysis.emotion_strategy.counts.items()
            for s, count in row.items()
        ]

    fairness = analysis.fairness_table
    if fairness is not None:
        plots["fairness_by_machine"] = [
            {"machine_kind": kind, "mean": d.mean, "sd": d.sd, "n": d.n}
            for kind, d in fairness.by_machine.items()
        ]

    if analysis.learning_curves is not None:
        plots["learning_curves"] = [
            {"persona": c.persona, **vars(point)}
            for c in analysis.learning_curves
            for point in c.points
        ]

    if analysis.streak_table is not None:
        plots["streak_bets"] = [vars(cell).copy() for cell in analysis.streak_table]

    if analysis.session_outcomes is not None:
        plots["win_rates"] = [
            {**_split_condition(cell.condition_id), "win_rate": rate}
            for cell in analysis.session_outcomes
            for rate in cell.win_rates
        ]
        plots["roi"] = [
            {**_split_condition(cell.condition_id), "roi": roi}
            for cell in analysis.session_outcomes
            for roi in cell.rois
        ]

    if sbi is not None:
        plots["sbi_profile"] = [
            {"component": name, "value": getattr(sbi, name)} for name in COMPONENTS
        ]
    return {name: pd.DataFrame(rows) for name, rows in plots.items()}


def _fmt(value: Optional[float], digits: int = 2) -> str:
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return "n/a"
    return f"{value:.{digits}f}"


def _header(lines: List[str], title: str, level: int = 2) -> None:
    lines.append(f"\n{'#' * level} {title}\n")


def _table(lines: List[str], columns: Iterable[str], rows: Iterable[Iterable[Any]]) -> None:
    columns = list(columns)
    lines.append("| " + " | ".join(columns) + " |")
    lines.append("|" + "|".join("---" for _ in columns) + "|")
    for row in rows:
        lines.append("| " + " | ".join(str(cell) for cell in row) + " |")
    lines.append("")


def _test_line(result: TestResult) -> str:
    df = f"({', '.join(f'{v:g}' for v in result.df)})" if result.df else ""
    return f"{result.test}{df} = {_fmt(result.statistic)}, {format_p(result.p_value)}"


def markdown_summary(analysis: AnalysisReport, sbi: Optional[SbiReport]) -> str:
    """Human-readable summary; p-values below 2.2e-16 are shown as a bound."""
    lines = ["# Benchmark summary", ""]
    lines.append(f"Run `{analysis.run_id or 'unknown'}`: {analysis.n_sessions} sessions, "
                 f"{analysis.n_rounds} rounds.")

    lengths = analysis.session_length_table
    if lengths is not None:
        _header(lines, "Session length")
        _table(lines, ["Persona", "n", "Mean", "Median", "SD"], [
            (p, d.n, _fmt(d.mean), _fmt(d.median), _fmt(d.sd))
            for p, d in lengths.by_persona.items()
        ])
        lines.append(_test_line(lengths.kruskal))
        lines.append("")
        _table(lines, ["Comparison", "U", "r", "Effect", "p", "Significant"], [
            (f"{c.group_a} vs {c.group_b}", _fmt(c.result.statistic, 1),
             _fmt(c.result.effect_size, 3), c.magnitude, format_p(c.result.p_value),
             "yes" if c.significant else "no")
            for c in lengths.pairwise
        ])
        if lengths.aborted_excluded:
            lines.append(f"{lengths.aborted_excluded} aborted sessions excluded.")

    for name, table in analysis.score_tables.items():
        _header(lines, f"Score: {name}")
        _table(lines, ["Persona", "n", "Mean", "SD"], [
            (p, d.n, _fmt(d.mean), _fmt(d.sd)) for p, d in table.by_persona.items()
        ])
        lines.append(_test_line(table.anova))
        lines.append("")
        _table(lines, ["Comparison", "Cohen's d", "Effect"], [
            (f"{c.group_a} vs {c.group_b}", _fmt(c.cohens_d, 3), c.magnitude)
            for c in table.pairwise_d
        ])

    bet = analysis.bet_table
    if bet is not None:
        _header(lines, "Bet amount")
        _table(lines, ["Persona", "n", "Mean", "Median", "SD", "Stake fraction"], [
            (p, d.n, _fmt(d.mean), _fmt(d.median), _fmt(d.sd), _fmt(bet.stake_fraction.get(p), 3))
            for p, d in bet.by_persona.items()
        ])
        lines.append(_test_line(bet.anova))
        lines.append("")
        lines.append(_test_line(bet.kruskal))
        lines.append("")

    if analysis.stop_predictor_table is not None:
        _header(lines, "Stop predictors")
        _table(lines, ["Field", "PLAY mean", "STOP mean", "Point-biserial", "MWU r", "p"], [
            (p.field, _fmt(p.play_mean), _fmt(p.stop_mean), _fmt(p.point_biserial.effect_size, 3),
             _fmt(p.mwu.effect_size, 3), format_p(p.point_biserial.p_value))
            for p in analysis.stop_predictor_table
        ])

    emotion = analysis.emotion_strategy
    if emotion is not None:
        _header(lines, "Emotion x strategy")
        strategies = list(next(iter(emotion.counts.values())).keys())
        _table(lines, ["Emotion", *strategies], [
            (e, *row.values()) for e, row in emotion.counts.items()
        ])
        lines.append(
            f"{_test_line(emotion.chi_square)}, "
            f"Cramer's V = {_fmt(emotion.chi_square.effect_size, 3)} "
            f"({emotion.magnitude}); CAUTIOUS with RISK_SEEKING: {emotion.incoherent_total} rounds"
        )
        lines.append("")

    if analysis.risk_bet_correlations is not None:
        _header(lines, "Risk score vs bet (PLAY rounds)")
        _table(lines, ["Group", "n", "rho", "Effect"], [
            (row.group, row.n, _fmt(row.rho, 3) if row.rho is not None else (row.note or "n/a"),
             interpret_effect(EffectKind.SPEARMAN_RHO, row.rho))
            for row in analysis.risk_bet_correlations
        ])

    fairness = analysis.fairness_table
    if fairness is not None:
        _header(lines, "Fairness by machine")
        _table(lines, ["Machine", "n", "Mean", "SD"], [
            (k, d.n, _fmt(d.mean), _fmt(d.sd)) for k, d in fairness.by_machine.items()
        ])
        lines.append(_test_line(fairness.anova))
        if fairness.fair_minus_biased is not None:
            lines.append(f"Fair minus biased_low: {_fmt(fairness.fair_minus_biased)} points")
        lines.append("")

    if analysis.learning_curves is not None:
        _header(lines, "Round vs risk")
        _table(lines, ["Persona", "rho", "Note"], [
            (c.persona, _fmt(c.rho, 3), c.note or "") for c in analysis.learning_curves
        ])

    if analysis.streak_table is not None:
        _header(lines, "Bets after streaks")
        _table(lines, ["Persona", "Bin", "n", "Mean bet", "Median bet"], [
            (c.persona, c.bin, c.n, _fmt(c.mean_bet), _fmt(c.median_bet))
            for c in analysis.streak_table
        ])

    if sbi is not None:
        _header(lines, "Socioeconomic Behavioral Index")
        _table(lines, ["Component", "Value"], [
            (name, _fmt(getattr(sbi, name), 3)) for name in COMPONENTS
        ] + [("aggregate", _fmt(sbi.aggregate, 3))])
        for name, reason in sbi.missing.items():
            lines.append(f"- {name}: {reason}")

    if analysis.skipped:
        _header(lines, "Skipped sections")
        for name, reason in analysis.skipped.items():
            lines.append(f"- {name}: {reason}")

    return "\n".join(lines).rstrip("\n") + "\n"


def _write_frames(directory: Path, frames: Dict[str, pd.DataFrame]) -> List[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, frame in frames.items():
        path = directory / f"{name}.csv"
        frame.to_csv(path, index=False, lineterminator="\n")
        written.append(path)
    return written


def emit_report(
    analysis: AnalysisReport,
    sbi: Optional[SbiReport],
    out_dir: Path,
    formats: Iterable[str] = FORMATS,
) -> List[Path]:
    """Write the requested report formats under ``out_dir``.

    Returns:
        The files written

    Raises:
        OSError: if the output directory is not writable
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    formats = set(formats)
    written: List[Path] = []
    writers: Dict[str, Callable[[], List[Path]]] = {
        "json": lambda: [_write_text(out_dir / "report.json", json.dumps(
            report_document(analysis, sbi), indent=2, allow_nan=False) + "\n")],
        "csv": lambda: _write_frames(out_dir / "tables", analysis_tables(analysis))
        + _write_frames(out_dir / "plots", plot_tables(analysis, sbi)),
        "md": lambda: [_write_text(out_dir / "summary.md", markdown_summary(analysis, sbi))],
    }
    for fmt in FORMATS:
        if fmt in formats:
            written.extend(writers[fmt]())
    console.log(f"[green]Wrote {len(written)} report files to {out_dir}[/green]")
    return written


def _write_text(path: Path, text: str) -> Path:
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    return path
