"""Run configuration for wagerbench."""

import hashlib
import json
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from .environment import MachineConfig, MachineConfigError, MachineKind
from .protocol import PROMPT_VERSION, Persona, PersonaName, get_persona

DEFAULT_API_KEY_ENV = "BENCH_API_KEY"
DEFAULT_OUTPUT_DIR = Path("runs") / "latest"

MACHINE_OVERRIDE_KEYS = ("base_win_prob", "streak_increment", "streak_cap", "payout_multiplier")


class ConfigError(ValueError):
    """Raised for unknown keys, type mismatches and missing required fields."""


class AgentBackend(str, Enum):
    REMOTE = "remote"
    SIMULANT = "simulant"


@dataclass
class RetryPolicy:
    """Retry schedule for transient endpoint failures."""
    max_attempts: int = 5
    backoff: float = 1.0  # seconds before the first retry, doubled each time
    max_backoff: float = 30.0
    jitter: float = 0.1  # fraction of the delay added at random

    def delay(self, attempt: int) -> float:
        """Base delay after the given failed attempt (1-based), before jitter."""
        return min(self.backoff * 2 ** (attempt - 1), self.max_backoff)


@dataclass
class AgentSpec:
    """Which agent answers the prompts and how to reach it."""
    backend: AgentBackend = AgentBackend.REMOTE
    model_name: str = ""
    endpoint_url: str = ""
    temperature: float = 1.0
    max_tokens: int = 1000
    timeout: float = 60.0
    api_key_env: str = DEFAULT_API_KEY_ENV
    auth_header: str = "Authorization"
    auth_scheme: str = "Bearer"
    retry_policy: RetryPolicy = field(default_factory=RetryPolicy)
    simulant_policy: str = "default"


@dataclass
class RunConfig:
    """One benchmark run: the persona x machine grid and how to play it."""
    personas: List[PersonaName] = field(default_factory=lambda: list(PersonaName))
    machines: List[MachineConfig] = field(
        default_factory=lambda: [MachineConfig.for_kind(kind) for kind in MachineKind]
    )
    iterations_per_condition: int = 50
    max_rounds: int = 50
    run_seed: int = 0
    agent: AgentSpec = field(default_factory=AgentSpec)
    output_dir: Path = DEFAULT_OUTPUT_DIR
    concurrency_limit: int = 4
    reprompt_budget: int = 2
    prompt_version: str = PROMPT_VERSION

    def __post_init__(self):
        if self.iterations_per_condition < 1:
            raise ConfigError("iterations must be at least 1")
        if self.max_rounds < 1:
            raise ConfigError("max_rounds must be at least 1")
        if not self.personas or not self.machines:
            raise ConfigError("The persona x machine grid is empty")
        if self.concurrency_limit < 1:
            raise ConfigError("concurrency must be at least 1")
        if self.reprompt_budget < 0:
            raise ConfigError("reprompt_budget must be non-negative")
        if not 0 <= self.run_seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        kinds = [m.kind for m in self.machines]
        if len(set(kinds)) != len(kinds):
            raise ConfigError("Each machine kind may appear only once")
        if len(set(self.personas)) != len(self.personas):
            raise ConfigError("Each persona may appear only once")

    def conditions(self) -> List[Tuple[Persona, MachineConfig]]:
        """The persona x machine grid in configuration order."""
        return [(get_persona(p), m) for p in self.personas for m in self.machines]

    def snapshot(self) -> Dict[str, Any]:
        """Run-defining settings; two runs with equal snapshots produce equal datasets."""
        return {
            "personas": [p.value for p in self.personas],
            "machines": [_machine_dict(m) for m in self.machines],
            "iterations": self.iterations_per_condition,
            "max_rounds": self.max_rounds,
            "seed": self.run_seed,
            "reprompt_budget": self.reprompt_budget,
            "prompt_version": self.prompt_version,
            "agent": {
                "backend": self.agent.backend.value,
                "model": self.agent.model_name,
                "endpoint": self.agent.endpoint_url,
                "temperature": self.agent.temperature,
                "max_tokens": self.agent.max_tokens,
                "simulant_policy": self.agent.simulant_policy,
            },
        }

    def config_hash(self) -> str:
        canonical = json.dumps(self.snapshot(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_dict(self) -> Dict[str, Any]:
        """Full configuration in the same shape :meth:`load` accepts."""
        agent = self.agent
        return {
            "personas": [p.value for p in self.personas],
            "machines": [m.kind.value for m in self.machines],
            "machine": [_machine_dict(m) for m in self.machines],
            "iterations": self.iterations_per_condition,
            "max_rounds": self.max_rounds,
            "seed": self.run_seed,
            "concurrency": self.concurrency_limit,
            "reprompt_budget": self.reprompt_budget,
            "output_dir": str(self.output_dir),
            "prompt_version": self.prompt_version,
            "agent": {
                "backend": agent.backend.value,
                "model": agent.model_name,
                "endpoint": agent.endpoint_url,
                "temperature": agent.temperature,
                "max_tokens": agent.max_tokens,
                "timeout": agent.timeout,
                "api_key_env": agent.api_key_env,
                "auth_header": agent.auth_header,
                "auth_scheme": agent.auth_scheme,
                "simulant_policy": agent.simulant_policy,
                "retry": {
                    "max_attempts": agent.retry_policy.max_attempts,
                    "backoff": agent.retry_policy.backoff,
                    "max_backoff": agent.retry_policy.max_backoff,
                    "jitter": agent.retry_policy.jitter,
                },
            },
        }

    @classmethod
    def load(
        cls, source: Union[str, Path, Dict], backend: Optional[AgentBackend] = None
    ) -> "RunConfig":
        """Load configuration from a file path or dictionary.

        Args:
            source: Either a YAML file path (str/Path) or a dictionary with config data
            backend: Force the agent backend regardless of what the source says
        """
        if isinstance(source, (str, Path)):
            path = Path(source)
            if not path.exists():
                raise FileNotFoundError(f"Configuration file not found: {path}")
            try:
                with open(path, "r") as f:
                    data = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigError(f"Invalid YAML in {path}: {e}") from e
        else:
            data = source
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("Configuration must be a mapping of keys to values")
        return _build(flatten_config(data), backend)

    def save(self, target: Union[str, Path]) -> None:
        path = Path(target)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            yaml.safe_dump(self.to_dict(), f, default_flow_style=False, sort_keys=False)


# Documented keys and their expected types
_KEY_TYPES: Dict[str, str] = {
    "personas": "str_list",
    "machines": "str_list",
    "iterations": "int",
    "max_rounds": "int",
    "seed": "int",
    "concurrency": "int",
    "reprompt_budget": "int",
    "output_dir": "str",
    "prompt_version": "str",
    "agent.backend": "str",
    "agent.model": "str",
    "agent.endpoint": "str",
    "agent.temperature": "float",
    "agent.max_tokens": "int",
    "agent.timeout": "float",
    "agent.api_key_env": "str",
    "agent.auth_header": "str",
    "agent.auth_scheme": "str",
    "agent.simulant_policy": "str",
    "agent.retry.max_attempts": "int",
    "agent.retry.backoff": "float",
    "agent.retry.max_backoff": "float",
    "agent.retry.jitter": "float",
}


def flatten_config(data: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Flatten nested mappings into dotted keys.

    The ``machine`` override block is kept whole, as a list of mappings.
    """
    flat: Dict[str, Any] = {}
    for key, value in data.items():
        full = f"{prefix}{key}"
        if full == "machine" or full.startswith("machine."):
            blocks = flat.setdefault("machine", [])
            if full == "machine":
                if isinstance(value, dict):
                    blocks.append(dict(value))
                elif isinstance(value, list):
                    blocks.extend(value)
                else:
                    raise ConfigError("machine must be a mapping or a list of mappings")
            else:
                if not blocks:
                    blocks.append({})
                blocks[0][full[len("machine."):]] = value
        elif isinstance(value, dict):
            flat.update(flatten_config(value, f"{full}."))
        else:
            if full in flat:
                raise ConfigError(f"Duplicate configuration key: {full}")
            flat[full] = value
    return flat


def _typed(key: str, value: Any) -> Any:
    expected = _KEY_TYPES[key]
    if expected == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key} must be an integer, got {value!r}")
        return value
    if expected == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        return float(value)
    if expected == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{key} must be a string, got {value!r}")
        return value
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ConfigError(f"{key} must be a list of names, got {value!r}")
    return value


def _enum_list(key: str, enum_cls, names: List[str]) -> list:
    members = []
    for name in names:
        try:
            members.append(enum_cls(name))
        except ValueError:
            valid = ", ".join(m.value for m in enum_cls)
            raise ConfigError(f"{key}: unknown value {name!r} (expected one of: {valid})") from None
    return members


def _apply_machine_overrides(
    machines: List[MachineConfig], blocks: List[Any]
) -> List[MachineConfig]:
    by_kind = {m.kind: m for m in machines}
    for block in blocks:
        if not isinstance(block, dict):
            raise ConfigError("Each machine override must be a mapping")
        unknown = set(block) - {"kind", *MACHINE_OVERRIDE_KEYS}
        if unknown:
            raise ConfigError(f"Unknown configuration key: machine.{sorted(unknown)[0]}")
        if "kind" not in block:
            raise ConfigError("machine.kind is required in a machine override")
        (kind,) = _enum_list("machine.kind", MachineKind, [block["kind"]])
        if kind not in by_kind:
            raise ConfigError(f"machine override for {kind.value!r}, which is not in machines")
        overrides = {}
        for key in MACHINE_OVERRIDE_KEYS:
            if key in block:
                value = block[key]
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(f"machine.{key} must be a number, got {value!r}")
                overrides[key] = float(value)
        try:
            by_kind[kind] = by_kind[kind].with_overrides(**overrides)
        except MachineConfigError as e:
            raise ConfigError(str(e)) from e
    return [by_kind[m.kind] for m in machines]


def _build(flat: Dict[str, Any], backend: Optional[AgentBackend]) -> RunConfig:
    values: Dict[str, Any] = {}
    for key, value in flat.items():
        if key == "machine":
            continue
        if key not in _KEY_TYPES:
            raise ConfigError(f"Unknown configuration key: {key}")
        values[key] = _typed(key, value)

    retry = RetryPolicy(
        max_attempts=values.get("agent.retry.max_attempts", 5),
        backoff=values.get("agent.retry.backoff", 1.0),
        max_backoff=values.get("agent.retry.max_backoff", 30.0),
        jitter=values.get("agent.retry.jitter", 0.1),
    )
    if retry.max_attempts < 1:
        raise ConfigError("agent.retry.max_attempts must be at least 1")

    chosen_backend = backend
    if chosen_backend is None:
        (chosen_backend,) = _enum_list(
            "agent.backend", AgentBackend, [values.get("agent.backend", "remote")]
        )
    agent = AgentSpec(
        backend=AgentBackend(chosen_backend),
        model_name=values.get("agent.model", ""),
        endpoint_url=values.get("agent.endpoint", ""),
        temperature=values.get("agent.temperature", 1.0),
        max_tokens=values.get("agent.max_tokens", 1000),
        timeout=values.get("agent.timeout", 60.0),
        api_key_env=values.get("agent.api_key_env", DEFAULT_API_KEY_ENV),
        auth_header=values.get("agent.auth_header", "Authorization"),
        auth_scheme=values.get("agent.auth_scheme", "Bearer"),
        retry_policy=retry,
        simulant_policy=values.get("agent.simulant_policy", "default"),
    )
    if agent.backend == AgentBackend.REMOTE:
        for key, attr in (("agent.model", "model_name"), ("agent.endpoint", "endpoint_url")):
            if not getattr(agent, attr):
                raise ConfigError(f"{key} is required for the remote backend")
    if agent.max_tokens < 1:
        raise ConfigError("agent.max_tokens must be at least 1")

    personas = _enum_list(
        "personas", PersonaName, values.get("personas", [p.value for p in PersonaName])
    )
    kinds = _enum_list(
        "machines", MachineKind, values.get("machines", [k.value for k in MachineKind])
    )
    machines = _apply_machine_overrides(
        [MachineConfig.for_kind(k) for k in kinds], flat.get("machine", [])
    )

    return RunConfig(
        personas=personas,
        machines=machines,
        iterations_per_condition=values.get("iterations", 50),
        max_rounds=values.get("max_rounds", 50),
        run_seed=values.get("seed", 0),
        agent=agent,
        output_dir=Path(values.get("output_dir", str(DEFAULT_OUTPUT_DIR))),
        concurrency_limit=values.get("concurrency", 4),
        reprompt_budget=values.get("reprompt_budget", 2),
        prompt_version=values.get("prompt_version", PROMPT_VERSION),
    )


def _machine_dict(machine: MachineConfig) -> Dict[str, Any]:
    return {
        "kind": machine.kind.value,
        "base_win_prob": machine.base_win_prob,
        "streak_increment": machine.streak_increment,
        "streak_cap": machine.streak_cap,
        "payout_multiplier": machine.payout_multiplier,
    }


def parse_config(
    config_path: Path,
    backend: Optional[AgentBackend] = None,
    seed: Optional[int] = None,
    output_dir: Optional[Path] = None,
) -> RunConfig:
    """Load a run configuration from a YAML file, applying command-line overrides."""
    config = RunConfig.load(Path(config_path), backend=backend)
    if seed is not None:
        config.run_seed = seed
        config.__post_init__()
    if output_dir is not None:
        config.output_dir = Path(output_dir)
    return config


def api_key_from_env(spec: AgentSpec) -> Optional[str]:
    """Credential for the remote endpoint, or None when the variable is unset."""
    return os.environ.get(spec.api_key_env) or None
