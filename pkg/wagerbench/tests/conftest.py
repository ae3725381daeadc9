"""Shared fixtures: small seeded datasets written by the simulant backend."""

from pathlib import Path

import pytest

from wagerbench.config import RunConfig
from wagerbench.runner import load_dataset, run_batch


def simulant_config(output_dir: Path, **overrides) -> RunConfig:
    """A simulant run configuration writing to ``output_dir``."""
    data = {
        "iterations": 4,
        "max_rounds": 20,
        "seed": 11,
        "concurrency": 2,
        "output_dir": str(output_dir),
        "agent": {"backend": "simulant"},
    }
    data.update(overrides)
    return RunConfig.load(data)


@pytest.fixture(scope="session")
def simulated_dir(tmp_path_factory):
    """A full-grid simulant dataset, written once per test session."""
    root = tmp_path_factory.mktemp("simulated") / "run"
    run_batch(simulant_config(root, iterations=10, max_rounds=30))
    return root


@pytest.fixture
def simulated(simulated_dir):
    """The shared simulant dataset, freshly loaded."""
    return load_dataset(simulated_dir)


@pytest.fixture
def tiny_config(tmp_path):
    """Two short sessions per condition in a private directory."""
    return simulant_config(tmp_path / "run", iterations=2, max_rounds=5)
