"""Tests for the cli module."""

import json
import os
import sys
from unittest.mock import patch

import click
import pytest
import yaml

from wagerbench import __version__
from wagerbench.cli import EXIT_AGENT, EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from wagerbench.display import set_quiet


def invoke(monkeypatch, *args) -> int:
    """Run the console script with ``args`` and return its exit code."""
    monkeypatch.setattr(sys, "argv", ["wagerbench", *map(str, args)])
    try:
        return main()
    finally:
        set_quiet(False)


@pytest.fixture
def config_file(tmp_path):
    """A small simulant configuration on disk."""
    path = tmp_path / "bench.yaml"
    path.write_text(yaml.safe_dump({
        "iterations": 2,
        "max_rounds": 5,
        "seed": 3,
        "concurrency": 2,
        "output_dir": str(tmp_path / "data"),
        "agent": {"backend": "simulant"},
    }))
    return path


@pytest.fixture
def dataset_dir(monkeypatch, config_file, tmp_path):
    """A dataset written through the simulate command."""
    assert invoke(monkeypatch, "-q", "simulate", "--config", config_file) == EXIT_OK
    return tmp_path / "data"


def _tree(root):
    return {
        path.relative_to(root).as_posix(): path.read_bytes()
        for path in sorted(root.rglob("*")) if path.is_file()
    }


def test_version(monkeypatch, capsys):
    assert invoke(monkeypatch, "--version") == EXIT_OK
    assert f"wagerbench {__version__}" in capsys.readouterr().out


class TestRunCommands:
    def test_simulate_writes_dataset(self, dataset_dir):
        assert (dataset_dir / "manifest.json").exists()
        assert len(list((dataset_dir / "rounds").glob("*.jsonl"))) == 9

    def test_simulate_is_reproducible(self, monkeypatch, config_file, dataset_dir, tmp_path):
        other = tmp_path / "again"
        code = invoke(monkeypatch, "-q", "simulate", "-c", config_file, "--out", other)
        assert code == EXIT_OK
        assert _tree(other / "rounds") == _tree(dataset_dir / "rounds")
        assert _tree(other / "sessions") == _tree(dataset_dir / "sessions")

    def test_seed_override(self, monkeypatch, config_file, tmp_path):
        out = tmp_path / "seeded"
        assert invoke(monkeypatch, "-q", "simulate", "-c", config_file, "-o", out,
                      "--seed", 99) == EXIT_OK
        assert json.loads((out / "manifest.json").read_text())["seed"] == 99

    def test_missing_config_option(self, monkeypatch):
        assert invoke(monkeypatch, "simulate") == EXIT_USAGE

    def test_unknown_command(self, monkeypatch):
        assert invoke(monkeypatch, "spin") == EXIT_USAGE

    def test_abort_is_a_usage_exit(self, monkeypatch, config_file):
        with patch("wagerbench.cli.run_batch", side_effect=click.Abort):
            assert invoke(monkeypatch, "simulate", "-c", config_file) == EXIT_USAGE

    def test_missing_config_file(self, monkeypatch, tmp_path):
        assert invoke(monkeypatch, "simulate", "-c", tmp_path / "absent.yaml") == EXIT_DATA

    def test_invalid_config(self, monkeypatch, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text(yaml.safe_dump({"iterations": 0}))
        assert invoke(monkeypatch, "simulate", "-c", path) == EXIT_DATA

    def test_remote_without_credential(self, monkeypatch, tmp_path):
        path = tmp_path / "remote.yaml"
        path.write_text(yaml.safe_dump({
            "iterations": 1,
            "max_rounds": 2,
            "output_dir": str(tmp_path / "remote"),
            "agent": {"model": "m", "endpoint": "https://example.invalid/v1"},
        }))
        with patch.dict(os.environ, {}, clear=True):
            assert invoke(monkeypatch, "run", "-c", path) == EXIT_AGENT


class TestDatasetCommands:
    def test_validate(self, monkeypatch, capsys, dataset_dir):
        capsys.readouterr()
        assert invoke(monkeypatch, "validate", "--data", dataset_dir) == EXIT_OK
        assert "all invariants hold" in capsys.readouterr().out

    def test_validate_tampered(self, monkeypatch, capsys, dataset_dir):
        path = dataset_dir / "rounds" / "poor__fair.jsonl"
        lines = path.read_text().splitlines()
        record = json.loads(lines[0])
        record["balance_after"] = record["balance_after"] + 1.0
        lines[0] = json.dumps(record)
        path.write_text("\n".join(lines) + "\n")
        assert invoke(monkeypatch, "validate", "-d", dataset_dir) == EXIT_DATA
        assert "problems in" in capsys.readouterr().out

    def test_missing_dataset(self, monkeypatch, tmp_path):
        assert invoke(monkeypatch, "analyze", "-d", tmp_path / "nothing") == EXIT_DATA

    def test_analyze_writes_selected_format(self, monkeypatch, dataset_dir, tmp_path):
        out = tmp_path / "analysis"
        assert invoke(monkeypatch, "-q", "analyze", "-d", dataset_dir, "-o", out,
                      "-f", "json") == EXIT_OK
        assert (out / "report.json").exists()
        assert not (out / "summary.md").exists()

    def test_bad_format(self, monkeypatch, dataset_dir, tmp_path):
        code = invoke(monkeypatch, "analyze", "-d", dataset_dir, "-o", tmp_path / "x", "-f", "pdf")
        assert code == EXIT_DATA

    def test_sbi(self, monkeypatch, dataset_dir, tmp_path):
        out = tmp_path / "index"
        assert invoke(monkeypatch, "-q", "sbi", "-d", dataset_dir, "-o", out) == EXIT_OK
        document = json.loads((out / "sbi.json").read_text())
        assert "aggregate" in document

    def test_sbi_bad_stability(self, monkeypatch, dataset_dir):
        assert invoke(monkeypatch, "sbi", "-d", dataset_dir, "--stability", "wobble") == EXIT_DATA

    def test_report_default_location_and_reruns(self, monkeypatch, dataset_dir):
        assert invoke(monkeypatch, "-q", "report", "-d", dataset_dir) == EXIT_OK
        report_dir = dataset_dir / "report"
        first = _tree(report_dir)
        assert "summary.md" in first and "report.json" in first
        assert invoke(monkeypatch, "-q", "report", "-d", dataset_dir) == EXIT_OK
        assert _tree(report_dir) == first


class TestPromptCommand:
    def test_first_round(self, monkeypatch, capsys):
        assert invoke(monkeypatch, "prompt", "--persona", "poor") == EXIT_OK
        out = capsys.readouterr().out
        assert "Round 1 of 50." in out
        assert "Your current balance is $50." in out

    def test_with_history(self, monkeypatch, capsys):
        code = invoke(monkeypatch, "prompt", "-p", "poor", "-r", "3", "--outcomes", "WL")
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "Round 3 of 50." in out
        assert "Your current balance is $50." in out

    def test_history_length_mismatch(self, monkeypatch):
        code = invoke(monkeypatch, "prompt", "-p", "rich", "-r", "3", "--outcomes", "W")
        assert code == EXIT_USAGE

    def test_unknown_persona(self, monkeypatch):
        assert invoke(monkeypatch, "prompt", "-p", "royal") == EXIT_USAGE
