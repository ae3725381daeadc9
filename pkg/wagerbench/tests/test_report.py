"""Tests for the report module."""

import dataclasses
import json
import math

import pandas as pd
import pytest

from wagerbench.metrics import analyze, sbi
from wagerbench.report import (
    FORMATS,
    analysis_tables,
    emit_report,
    finite_or_none,
    markdown_summary,
    plot_tables,
    report_document,
    resolve_formats,
)


@pytest.fixture
def reports(simulated):
    """Analysis and index computed from the shared simulant dataset."""
    return analyze(simulated), sbi(simulated)


class TestResolveFormats:
    def test_all(self):
        assert resolve_formats("all") == set(FORMATS)

    def test_single(self):
        assert resolve_formats(" CSV ") == {"csv"}

    def test_unknown(self):
        with pytest.raises(ValueError, match="Unknown format"):
            resolve_formats("xlsx")


def test_finite_or_none():
    data = {"a": math.nan, "b": [1.0, math.inf, {"c": -math.inf}], "d": "text", "e": 3}
    assert finite_or_none(data) == {"a": None, "b": [1.0, None, {"c": None}], "d": "text", "e": 3}


class TestTables:
    def test_analysis_tables(self, reports):
        tables = analysis_tables(reports[0])
        assert len(tables["session_length"]) == 3
        assert len(tables["session_length_pairwise"]) == 3
        assert len(tables["fairness"]) == 3
        assert len(tables["session_outcomes"]) == 9
        assert list(tables["risk_bet"]["group"])[-1] == "overall"
        assert "kruskal_wallis" in set(tables["tests"]["test"])

    def test_plot_tables(self, reports):
        plots = plot_tables(*reports)
        assert len(plots["sbi_profile"]) == 5
        assert len(plots["session_length_by_condition"]) == 9

    def test_plot_tables_without_index(self, reports):
        assert "sbi_profile" not in plot_tables(reports[0], None)


class TestMarkdown:
    def test_sections(self, reports):
        text = markdown_summary(*reports)
        assert text.startswith("# Benchmark summary")
        assert "## Session length" in text
        assert "## Socioeconomic Behavioral Index" in text
        assert text.endswith("\n") and not text.endswith("\n\n")

    def test_tiny_p_values_are_floored(self, reports):
        analysis = reports[0]
        table = analysis.session_length_table
        table.kruskal = dataclasses.replace(table.kruskal, p_value=1e-40)
        assert "p < 2.2e-16" in markdown_summary(analysis, None)

    def test_skipped_sections_listed(self, reports):
        analysis = reports[0]
        analysis.skipped["streak_table"] = "No PLAY round has two earlier rounds to bin on"
        text = markdown_summary(analysis, None)
        assert "## Skipped sections" in text
        assert "- streak_table: No PLAY round" in text


class TestEmitReport:
    def test_all_formats(self, reports, tmp_path):
        written = emit_report(*reports, tmp_path / "report")
        root = tmp_path / "report"
        assert root / "report.json" in written
        assert root / "summary.md" in written
        assert (root / "tables" / "session_length.csv").exists()
        assert (root / "plots" / "sbi_profile.csv").exists()
        assert all(path.exists() for path in written)

    def test_json_matches_document(self, reports, tmp_path):
        emit_report(*reports, tmp_path, formats={"json"})
        with open(tmp_path / "report.json", encoding="utf-8") as f:
            loaded = json.load(f)
        assert loaded == report_document(*reports)
        assert loaded["sbi"]["aggregate"] == pytest.approx(reports[1].aggregate)

    def test_csv_rows_match_tables(self, reports, tmp_path):
        emit_report(*reports, tmp_path, formats={"csv"})
        for name, frame in analysis_tables(reports[0]).items():
            assert len(pd.read_csv(tmp_path / "tables" / f"{name}.csv")) == len(frame)
        assert not (tmp_path / "report.json").exists()

    def test_selected_format_only(self, reports, tmp_path):
        written = emit_report(*reports, tmp_path, formats={"md"})
        assert written == [tmp_path / "summary.md"]
        assert not (tmp_path / "tables").exists()

    def test_deterministic(self, reports, tmp_path):
        first = emit_report(*reports, tmp_path / "a")
        second = emit_report(*reports, tmp_path / "b")
        for a, b in zip(first, second):
            assert a.read_bytes() == b.read_bytes()
