"""Tests for the config module."""

import os
from pathlib import Path
from unittest.mock import patch

import pytest
import yaml

from wagerbench.config import (
    AgentBackend,
    AgentSpec,
    ConfigError,
    RetryPolicy,
    RunConfig,
    api_key_from_env,
    flatten_config,
    parse_config,
)
from wagerbench.environment import MachineKind
from wagerbench.protocol import PersonaName


@pytest.fixture
def remote_dict():
    """A minimal remote configuration."""
    return {
        "agent": {
            "backend": "remote",
            "model": "test-model",
            "endpoint": "https://example.invalid/v1/chat/completions",
        }
    }


@pytest.fixture
def config_file(tmp_path, remote_dict):
    """The remote configuration written to a YAML file."""
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(remote_dict))
    return path


class TestDefaults:
    def test_empty_agent_config_takes_protocol_defaults(self, remote_dict):
        config = RunConfig.load(remote_dict)
        assert config.iterations_per_condition == 50
        assert config.max_rounds == 50
        assert config.agent.temperature == 1.0
        assert config.agent.max_tokens == 1000
        assert config.personas == list(PersonaName)
        assert [m.kind for m in config.machines] == list(MachineKind)
        assert config.agent.api_key_env == "BENCH_API_KEY"

    def test_reduced_protocol(self, remote_dict):
        config = RunConfig.load({**remote_dict, "iterations": 20})
        assert config.iterations_per_condition == 20

    def test_simulant_needs_no_endpoint(self):
        config = RunConfig.load({"agent": {"backend": "simulant"}})
        assert config.agent.backend == AgentBackend.SIMULANT
        assert config.agent.simulant_policy == "default"


class TestValidation:
    def test_unknown_key_fails_closed(self, remote_dict):
        remote_dict["agent"]["temprature"] = 1.0
        with pytest.raises(ConfigError, match="agent.temprature"):
            RunConfig.load(remote_dict)

    def test_type_mismatch(self, remote_dict):
        with pytest.raises(ConfigError, match="iterations"):
            RunConfig.load({**remote_dict, "iterations": "many"})

    def test_bool_is_not_an_integer(self, remote_dict):
        with pytest.raises(ConfigError):
            RunConfig.load({**remote_dict, "max_rounds": True})

    def test_remote_requires_model_and_endpoint(self):
        with pytest.raises(ConfigError, match="agent.model"):
            RunConfig.load({"agent": {"backend": "remote"}})

    def test_unknown_persona(self, remote_dict):
        with pytest.raises(ConfigError, match="personas"):
            RunConfig.load({**remote_dict, "personas": ["rich", "royal"]})

    def test_non_positive_iterations(self, remote_dict):
        with pytest.raises(ConfigError):
            RunConfig.load({**remote_dict, "iterations": 0})

    def test_duplicate_machine(self, remote_dict):
        with pytest.raises(ConfigError):
            RunConfig.load({**remote_dict, "machines": ["fair", "fair"]})

    def test_missing_file(self, tmp_path):
        path = tmp_path / "absent.yaml"
        with pytest.raises(FileNotFoundError, match="Configuration file not found"):
            RunConfig.load(path)

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("agent: [unclosed\n")
        with pytest.raises(ConfigError, match="Invalid YAML"):
            RunConfig.load(path)


def test_dotted_and_nested_keys_agree(remote_dict):
    dotted = {
        "agent.backend": "remote",
        "agent.model": "test-model",
        "agent.endpoint": "https://example.invalid/v1/chat/completions",
        "agent.retry.max_attempts": 3,
    }
    nested = {**remote_dict}
    nested["agent"] = {**remote_dict["agent"], "retry": {"max_attempts": 3}}
    assert RunConfig.load(dotted).config_hash() == RunConfig.load(nested).config_hash()
    assert RunConfig.load(dotted).agent.retry_policy.max_attempts == 3


def test_flatten_keeps_machine_blocks_whole():
    flat = flatten_config({"machine": {"kind": "streak", "streak_cap": 0.7}, "seed": 3})
    assert flat == {"machine": [{"kind": "streak", "streak_cap": 0.7}], "seed": 3}


class TestMachineOverrides:
    def test_override_applies(self, remote_dict):
        config = RunConfig.load({**remote_dict, "machine": {"kind": "streak", "streak_cap": 0.7}})
        streak = next(m for m in config.machines if m.kind == MachineKind.STREAK)
        assert streak.streak_cap == 0.7
        assert streak.base_win_prob == 0.40

    def test_list_of_overrides(self, remote_dict):
        config = RunConfig.load({
            **remote_dict,
            "machine": [
                {"kind": "fair", "base_win_prob": 0.45},
                {"kind": "biased_low", "base_win_prob": 0.30},
            ],
        })
        probabilities = {m.kind: m.base_win_prob for m in config.machines}
        assert probabilities[MachineKind.FAIR] == 0.45
        assert probabilities[MachineKind.BIASED_LOW] == 0.30

    def test_override_is_revalidated(self, remote_dict):
        with pytest.raises(ConfigError):
            RunConfig.load({**remote_dict, "machine": {"kind": "streak", "streak_cap": 0.2}})

    def test_unknown_override_key(self, remote_dict):
        with pytest.raises(ConfigError, match="machine.payout"):
            RunConfig.load({**remote_dict, "machine": {"kind": "fair", "payout": 3}})

    def test_override_for_absent_machine(self, remote_dict):
        with pytest.raises(ConfigError):
            RunConfig.load({
                **remote_dict,
                "machines": ["fair"],
                "machine": {"kind": "streak", "streak_cap": 0.7},
            })


class TestHashing:
    def test_hash_ignores_output_dir_and_concurrency(self, remote_dict):
        a = RunConfig.load({**remote_dict, "output_dir": "a", "concurrency": 1})
        b = RunConfig.load({**remote_dict, "output_dir": "b", "concurrency": 8})
        assert a.config_hash() == b.config_hash()

    def test_hash_tracks_seed(self, remote_dict):
        a = RunConfig.load({**remote_dict, "seed": 1})
        b = RunConfig.load({**remote_dict, "seed": 2})
        assert a.config_hash() != b.config_hash()

    def test_snapshot_has_no_credentials(self, remote_dict):
        snapshot = RunConfig.load(remote_dict).snapshot()
        assert "api_key_env" not in snapshot["agent"]
        assert "output_dir" not in snapshot


def test_save_and_load(tmp_path, remote_dict):
    config = RunConfig.load({
        **remote_dict, "seed": 9, "machine": {"kind": "streak", "streak_increment": 0.04}
    })
    path = tmp_path / "saved" / "config.yaml"
    config.save(path)
    assert RunConfig.load(path).config_hash() == config.config_hash()


class TestParseConfig:
    def test_command_line_overrides(self, config_file, tmp_path):
        config = parse_config(config_file, seed=42, output_dir=tmp_path / "out")
        assert config.run_seed == 42
        assert config.output_dir == tmp_path / "out"

    def test_forced_backend(self, tmp_path):
        path = tmp_path / "plain.yaml"
        path.write_text("iterations: 3\n")
        config = parse_config(path, backend=AgentBackend.SIMULANT)
        assert config.agent.backend == AgentBackend.SIMULANT

    def test_negative_seed_rejected(self, config_file):
        with pytest.raises(ConfigError):
            parse_config(config_file, seed=-1)


class TestRetryPolicy:
    def test_exponential_delay_is_capped(self):
        policy = RetryPolicy(backoff=1.0, max_backoff=5.0)
        assert [policy.delay(a) for a in range(1, 6)] == [1.0, 2.0, 4.0, 5.0, 5.0]


class TestApiKey:
    @patch.dict(os.environ, {"BENCH_API_KEY": "secret"})
    def test_reads_named_variable(self):
        assert api_key_from_env(AgentSpec()) == "secret"

    @patch.dict(os.environ, {"OTHER_KEY": "other"}, clear=True)
    def test_variable_name_is_configurable(self):
        assert api_key_from_env(AgentSpec(api_key_env="OTHER_KEY")) == "other"
        assert api_key_from_env(AgentSpec()) is None

    @patch.dict(os.environ, {"BENCH_API_KEY": ""})
    def test_empty_value_counts_as_missing(self):
        assert api_key_from_env(AgentSpec()) is None


def test_shipped_configs_load():
    root = Path(__file__).resolve().parents[2] / "configs"
    simulate = RunConfig.load(root / "simulate.yaml")
    assert simulate.agent.backend == AgentBackend.SIMULANT
    assert simulate.iterations_per_condition == 20
    remote = RunConfig.load(root / "remote.example.yaml")
    assert remote.agent.backend == AgentBackend.REMOTE
