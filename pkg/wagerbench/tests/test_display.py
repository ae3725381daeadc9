"""Tests for the display module."""

from collections import Counter
from pathlib import Path

from wagerbench.display import (
    debug_log,
    set_debug,
    set_quiet,
    show_analysis,
    show_batch_summary,
    show_sbi,
)
from wagerbench.metrics import AnalysisReport, SbiReport, analyze
from wagerbench.runner import BatchResult


def test_show_batch_summary(capsys):
    result = BatchResult(
        output_dir=Path("runs/x"),
        run_id="abc123def456",
        sessions_run=3,
        termination_counts={"poor__fair": Counter({"STOPPED": 2, "BANKRUPT": 1})},
    )
    show_batch_summary(result)
    out = capsys.readouterr().out
    assert "Run abc123def456" in out
    assert "poor__fair" in out
    assert "Sessions run: 3" in out


def test_show_analysis_lists_skipped_sections(capsys):
    report = AnalysisReport(n_rounds=4, n_sessions=2, skipped={"streak_table": "too short"})
    show_analysis(report)
    out = capsys.readouterr().out
    assert "2 sessions, 4 rounds" in out
    assert "Skipped streak_table" in out


def test_show_analysis_profile(capsys):
    report = AnalysisReport(
        n_rounds=4, n_sessions=2, psych_profile={"poor": {"risk_score": 63.0}}
    )
    show_analysis(report)
    out = capsys.readouterr().out
    assert "Mean scores" in out
    assert "63.00" in out


def test_show_sbi(capsys):
    report = SbiReport(
        prospect_alignment=0.9512,
        missing={"belief_rigidity": "poor persona: fewer than three rounds"},
    )
    show_sbi(report)
    out = capsys.readouterr().out
    assert "Socioeconomic Behavioral Index" in out
    assert "0.951" in out
    assert "n/a" in out
    assert "belief_rigidity not computed" in out


def test_quiet_suppresses_output(capsys):
    set_quiet(True)
    try:
        show_sbi(SbiReport())
    finally:
        set_quiet(False)
    assert capsys.readouterr().out == ""


def test_debug_log(capsys):
    debug_log("hidden")
    assert "hidden" not in capsys.readouterr().out
    set_debug(True)
    try:
        debug_log("shown")
    finally:
        set_debug(False)
    assert "shown" in capsys.readouterr().out


def test_show_analysis_full_report(capsys, simulated):
    show_analysis(analyze(simulated))
    out = capsys.readouterr().out
    assert "Session length" in out
    assert "Stop predictors" in out
    assert "Fairness by machine" in out
