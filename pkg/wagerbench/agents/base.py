"""Base class for decision-making agents."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..display import debug_log
from ..environment import InvalidBet
from ..protocol import (
    PROMPT_VERSION,
    DecisionRecord,
    NormalizationFlag,
    ParseError,
    RoundContext,
    build_round_context,
    parse_decision,
    reprompt_message,
    validate_decision,
)


class AgentError(RuntimeError):
    """Base class for agent failures that end a session."""


class AgentUnavailable(AgentError):
    """The endpoint could not be reached within the retry policy."""


class AuthError(AgentError):
    """The credential is missing or was rejected."""


class PersistentParseFailure(AgentError):
    """Every reply within the re-prompt budget was unusable."""


@dataclass
class AgentReply:
    """A validated decision plus what it took to obtain it."""
    record: DecisionRecord
    flags: List[NormalizationFlag] = field(default_factory=list)
    raw_reply: str = ""
    latency_ms: float = 0.0
    reprompt_count: int = 0


class Agent(ABC):
    """Base class for all agents."""

    def __init__(self, name: str, reprompt_budget: int = 2, prompt_version: str = PROMPT_VERSION):
        """Initialize the agent.

        Args:
            name: Label used in console messages
            reprompt_budget: Extra attempts allowed after an unusable reply
            prompt_version: Which packaged prompt templates to render
        """
        self.name = name
        self.reprompt_budget = reprompt_budget
        self.prompt_version = prompt_version

    @abstractmethod
    def reply(
        self,
        context: RoundContext,
        messages: List[Dict[str, str]],
        rng: np.random.Generator,
    ) -> Tuple[str, float]:
        """Produce one raw reply and its latency in milliseconds."""
        pass

    def close(self) -> None:
        """Release any resources the agent holds."""
        pass

    def decide(self, context: RoundContext, rng: np.random.Generator) -> AgentReply:
        """Ask for a decision, re-prompting after unparseable or invalid replies.

        Raises:
            PersistentParseFailure: when the re-prompt budget runs out
            AgentUnavailable, AuthError: propagated from the backend
        """
        messages = build_round_context(context, self.prompt_version)
        latency = 0.0
        last_error: Optional[Exception] = None
        for attempt in range(self.reprompt_budget + 1):
            raw, elapsed = self.reply(context, messages, rng)
            latency += elapsed
            try:
                record, flags = validate_decision(parse_decision(raw), context.current_balance)
            except (ParseError, InvalidBet) as e:
                last_error = e
                debug_log(f"{self.name} round {context.round_index}: unusable reply ({e})")
                messages = messages + [{"role": "assistant", "content": raw}, reprompt_message(e)]
                continue
            return AgentReply(record, flags, raw, latency, attempt)
        raise PersistentParseFailure(
            f"{self.name}: no usable decision in round {context.round_index} after "
            f"{self.reprompt_budget + 1} replies (last error: {last_error})"
        )


def decide(agent: Agent, context: RoundContext, rng: np.random.Generator) -> DecisionRecord:
    """Return the validated decision of ``agent`` for one round."""
    return agent.decide(context, rng).record
