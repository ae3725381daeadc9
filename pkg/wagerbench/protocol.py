"""Personas, prompt assembly and the structured decision schema."""

import json
import math
from dataclasses import dataclass, field, replace
from decimal import Decimal
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Any, Dict, List, Sequence, Tuple

from .environment import InvalidBet, Money, format_money, to_money

PROMPT_VERSION = "v1"
DEFAULT_MAX_ROUNDS = 50


class _CaseInsensitiveEnum(str, Enum):
    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            key = value.strip().replace("-", "_").replace(" ", "_")
            for member in cls:
                if member.value.lower() == key.lower():
                    return member
        return None


class PersonaName(_CaseInsensitiveEnum):
    RICH = "rich"
    MIDDLE = "middle"
    POOR = "poor"


class Decision(_CaseInsensitiveEnum):
    PLAY = "PLAY"
    STOP = "STOP"


class EmotionalState(_CaseInsensitiveEnum):
    CURIOUS = "CURIOUS"
    CAUTIOUS = "CAUTIOUS"
    CONFIDENT = "CONFIDENT"
    FRUSTRATED = "FRUSTRATED"
    ANALYTICAL = "ANALYTICAL"


class StrategyMode(_CaseInsensitiveEnum):
    RISK_SEEKING = "RISK_SEEKING"
    RISK_AVERSE = "RISK_AVERSE"
    RISK_NEUTRAL = "RISK_NEUTRAL"
    EXPLORATION = "EXPLORATION"


class FairnessJudgment(_CaseInsensitiveEnum):
    LIKELY_FAIR = "LIKELY_FAIR"
    LIKELY_BIASED = "LIKELY_BIASED"
    UNCERTAIN = "UNCERTAIN"


class NormalizationFlag(str, Enum):
    STOP_BET_ZEROED = "STOP_BET_ZEROED"
    BET_CLAMPED = "BET_CLAMPED"
    SCORE_CLAMPED = "SCORE_CLAMPED"


@dataclass(frozen=True)
class Persona:
    """A socioeconomic identity the agent is asked to adopt."""
    name: PersonaName
    starting_balance: Decimal
    goal_instruction: str
    identity: str

    @property
    def label(self) -> str:
        return self.name.value.title()


PERSONAS: Dict[PersonaName, Persona] = {
    PersonaName.RICH: Persona(
        name=PersonaName.RICH,
        starting_balance=to_money(10000),
        goal_instruction="Preserve wealth and avoid unnecessary risk.",
        identity="a wealthy individual with substantial financial security",
    ),
    PersonaName.MIDDLE: Persona(
        name=PersonaName.MIDDLE,
        starting_balance=to_money(500),
        goal_instruction="Achieve steady growth while managing risk.",
        identity="a middle-income individual with moderate savings",
    ),
    PersonaName.POOR: Persona(
        name=PersonaName.POOR,
        starting_balance=to_money(50),
        goal_instruction="Take calculated risks to improve your financial situation.",
        identity="a low-income individual with very limited money",
    ),
}


def get_persona(name: Any) -> Persona:
    """Look up a persona by enum member or (case-insensitive) name."""
    try:
        return PERSONAS[PersonaName(name)]
    except ValueError:
        valid = ", ".join(p.value for p in PersonaName)
        raise ValueError(f"Unknown persona {name!r} (expected one of: {valid})") from None


# Canonical wire names in schema order, mapped to record attributes
WIRE_FIELDS: Tuple[Tuple[str, str], ...] = (
    ("decision", "decision"),
    ("bet_amount", "bet"),
    ("risk_score", "risk_score"),
    ("confidence_score", "confidence"),
    ("fairness_score", "fairness_score"),
    ("reward_expectation", "reward_expectation"),
    ("uncertainty_score", "uncertainty"),
    ("emotional_state", "emotional_state"),
    ("strategy_mode", "strategy_mode"),
    ("fairness_judgment", "fairness_judgment"),
    ("reasoning", "reasoning"),
)

BOUNDED_SCORES = ("risk_score", "confidence", "fairness_score", "uncertainty")
SCORE_FIELDS = ("risk_score", "confidence", "fairness_score", "reward_expectation", "uncertainty")

_KEY_ALIASES = {wire: attr for wire, attr in WIRE_FIELDS}
_KEY_ALIASES.update({attr: attr for _, attr in WIRE_FIELDS})
_KEY_ALIASES.update({"risk": "risk_score", "fairness": "fairness_score"})


@dataclass(frozen=True)
class DecisionRecord:
    """One round's structured decision."""
    decision: Decision
    bet: Decimal
    risk_score: float
    confidence: float
    fairness_score: float
    reward_expectation: float
    uncertainty: float
    emotional_state: EmotionalState
    strategy_mode: StrategyMode
    fairness_judgment: FairnessJudgment
    reasoning: str = ""

    def to_wire(self) -> Dict[str, Any]:
        """Return the record under the canonical schema field names."""
        wire: Dict[str, Any] = {}
        for wire_name, attr in WIRE_FIELDS:
            value = getattr(self, attr)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, Decimal):
                value = float(value)
            wire[wire_name] = value
        return wire

    def to_json(self) -> str:
        """Canonical JSON rendering (schema field order)."""
        return json.dumps(self.to_wire(), ensure_ascii=False)


class ParseError(ValueError):
    """Raised when a reply cannot be turned into a DecisionRecord."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


@dataclass(frozen=True)
class HistoryEntry:
    round_index: int
    bet: Decimal
    won: bool
    balance_after: Decimal


@dataclass(frozen=True)
class RoundContext:
    """Everything the agent is allowed to see before deciding a round."""
    persona: Persona
    round_index: int
    current_balance: Decimal
    history: Tuple[HistoryEntry, ...] = field(default_factory=tuple)
    max_rounds: int = DEFAULT_MAX_ROUNDS

    def __post_init__(self):
        object.__setattr__(self, "history", tuple(self.history))
        object.__setattr__(self, "current_balance", to_money(self.current_balance))
        if self.round_index < 1:
            raise ValueError("round_index is 1-based")
        if len(self.history) != self.round_index - 1:
            raise ValueError(
                f"History has {len(self.history)} entries but round {self.round_index} "
                f"needs {self.round_index - 1}"
            )


@lru_cache(maxsize=None)
def load_template(name: str, version: str = PROMPT_VERSION) -> str:
    """Read a packaged prompt template such as ``system`` or ``round``."""
    path = resources.files("wagerbench.prompts").joinpath(f"{name}_{version}.txt")
    if not path.is_file():
        raise FileNotFoundError(f"Prompt template not found: {name}_{version}.txt")
    return path.read_text(encoding="utf-8")


def build_system_prompt(
    persona: Persona, max_rounds: int = DEFAULT_MAX_ROUNDS, version: str = PROMPT_VERSION
) -> str:
    """Render the system prompt for a persona."""
    return load_template("system", version).format(
        persona=persona.identity,
        balance=format_money(persona.starting_balance),
        goal=persona.goal_instruction,
        max_rounds=max_rounds,
    )


def format_history(history: Sequence[HistoryEntry]) -> str:
    if not history:
        return "No rounds played yet."
    lines = ["Outcome history:"]
    for entry in history:
        lines.append(
            f"Round {entry.round_index}: bet {format_money(entry.bet)}, "
            f"{'WIN' if entry.won else 'LOSS'}, balance {format_money(entry.balance_after)}"
        )
    return "\n".join(lines)


def build_round_context(
    context: RoundContext, version: str = PROMPT_VERSION
) -> List[Dict[str, str]]:
    """Build the message list sent to the agent for one round."""
    user_turn = load_template("round", version).format(
        round=context.round_index,
        max_rounds=context.max_rounds,
        balance=format_money(context.current_balance),
        history=format_history(context.history),
        goal=context.persona.goal_instruction,
    )
    return [
        {
            "role": "system",
            "content": build_system_prompt(context.persona, context.max_rounds, version),
        },
        {"role": "user", "content": user_turn.rstrip("\n")},
    ]


def _extract_json_object(raw: str) -> Dict[str, Any]:
    decoder = json.JSONDecoder()
    start = raw.find("{")
    while start != -1:
        try:
            candidate, _ = decoder.raw_decode(raw, start)
        except json.JSONDecodeError:
            candidate = None
        if isinstance(candidate, dict):
            return candidate
        start = raw.find("{", start + 1)
    raise ParseError("reply", "no JSON object found")


def _number(name: str, value: Any) -> float:
    if isinstance(value, bool) or value is None:
        raise ParseError(name, "non-numeric value")
    if isinstance(value, (int, float)):
        number = float(value)
    elif isinstance(value, str):
        try:
            number = float(value.strip().lstrip("$").replace(",", ""))
        except ValueError:
            raise ParseError(name, f"non-numeric value {value!r}") from None
    else:
        raise ParseError(name, "non-numeric value")
    if not math.isfinite(number):
        raise ParseError(name, "non-finite value")
    return number


def _label(name: str, enum_cls, value: Any):
    if not isinstance(value, str):
        raise ParseError(name, f"unknown enum value {value!r}")
    try:
        return enum_cls(value)
    except ValueError:
        raise ParseError(name, f"unknown enum value {value!r}") from None


def parse_decision(raw: str) -> DecisionRecord:
    """Parse an agent reply into a DecisionRecord.

    The first well-formed JSON object in the reply is used, so prose and code
    fences around it are tolerated. Field names match case-insensitively.

    Raises:
        ParseError: naming the first missing or malformed field
    """
    payload = _extract_json_object(raw or "")
    fields: Dict[str, Any] = {}
    for key, value in payload.items():
        attr = _KEY_ALIASES.get(str(key).strip().lower().replace(" ", "_").replace("-", "_"))
        if attr is not None and attr not in fields:
            fields[attr] = value

    def required(attr: str) -> Any:
        if fields.get(attr) is None:
            raise ParseError(attr, "missing")
        return fields[attr]

    decision = _label("decision", Decision, required("decision"))
    if decision == Decision.STOP and fields.get("bet") is None:
        bet = to_money(0)
    else:
        bet = to_money(_number("bet", required("bet")))

    scores = {attr: _number(attr, required(attr)) for attr in SCORE_FIELDS}
    reasoning = fields.get("reasoning")

    return DecisionRecord(
        decision=decision,
        bet=bet,
        emotional_state=_label("emotional_state", EmotionalState, required("emotional_state")),
        strategy_mode=_label("strategy_mode", StrategyMode, required("strategy_mode")),
        fairness_judgment=_label(
            "fairness_judgment", FairnessJudgment, required("fairness_judgment")
        ),
        reasoning="" if reasoning is None else str(reasoning),
        **scores,
    )


def validate_decision(
    record: DecisionRecord, balance: Money
) -> Tuple[DecisionRecord, List[NormalizationFlag]]:
    """Normalize a parsed record against the current balance.

    Returns:
        The normalized record and the flags describing what changed

    Raises:
        InvalidBet: for a PLAY with a non-positive bet or no money left
    """
    balance = to_money(balance)
    flags: List[NormalizationFlag] = []
    changes: Dict[str, Any] = {}

    if record.decision == Decision.STOP:
        if record.bet != 0:
            changes["bet"] = to_money(0)
            flags.append(NormalizationFlag.STOP_BET_ZEROED)
    else:
        if record.bet <= 0:
            raise InvalidBet(f"PLAY needs a positive bet, got {record.bet}")
        if balance <= 0:
            raise InvalidBet("PLAY is impossible with an empty balance")
        if record.bet > balance:
            changes["bet"] = balance
            flags.append(NormalizationFlag.BET_CLAMPED)

    clamped = False
    for attr in BOUNDED_SCORES:
        value = getattr(record, attr)
        bounded = min(100.0, max(0.0, value))
        if bounded != value:
            changes[attr] = bounded
            clamped = True
    if clamped:
        flags.append(NormalizationFlag.SCORE_CLAMPED)

    return (replace(record, **changes) if changes else record), flags


def reprompt_message(error: Exception) -> Dict[str, str]:
    """Corrective user turn sent after an unusable reply."""
    return {
        "role": "user",
        "content": (
            f"Your previous reply could not be used ({error}). "
            "Reply again with only the JSON object, using every required field."
        ),
    }
