"""Agents that answer the per-round decision prompt."""

import threading
from typing import Optional

from ..config import AgentBackend, AgentSpec
from ..protocol import PROMPT_VERSION, Persona
from .base import (
    Agent,
    AgentError,
    AgentReply,
    AgentUnavailable,
    AuthError,
    PersistentParseFailure,
    decide,
)
from .remote import RemoteAgent
from .simulant import ScoreProfile, SimulantAgent, SimulantPolicy, policy_set, simulant_decide


def build_agent(
    spec: AgentSpec,
    persona: Persona,
    reprompt_budget: int = 2,
    prompt_version: str = PROMPT_VERSION,
    gate: Optional[threading.BoundedSemaphore] = None,
) -> Agent:
    """Create a fresh agent for one session.

    Args:
        spec: Which backend to use and its settings
        persona: Persona of the session (selects the simulant policy)
        reprompt_budget: Extra attempts allowed after an unusable reply
        prompt_version: Which packaged prompt templates to render
        gate: Semaphore shared by remote agents to bound in-flight requests
    """
    if spec.backend == AgentBackend.SIMULANT:
        policy = policy_set(spec.simulant_policy)[persona.name]
        return SimulantAgent(policy, reprompt_budget, prompt_version)
    return RemoteAgent(spec, reprompt_budget, prompt_version, gate=gate)


__all__ = [
    "Agent",
    "AgentError",
    "AgentReply",
    "AgentUnavailable",
    "AuthError",
    "PersistentParseFailure",
    "RemoteAgent",
    "ScoreProfile",
    "SimulantAgent",
    "SimulantPolicy",
    "build_agent",
    "decide",
    "policy_set",
    "simulant_decide",
]
