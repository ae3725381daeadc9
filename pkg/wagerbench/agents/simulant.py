"""Scripted persona simulants for offline runs.

A simulant samples every field of a decision from a fixed policy, driven only
by the round context it is shown and the session's agent generator. Given the
same seed it reproduces the same decisions bit for bit.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Dict, List, Mapping, Tuple

import numpy as np

from ..environment import CENT, to_money
from ..protocol import (
    BOUNDED_SCORES,
    PROMPT_VERSION,
    SCORE_FIELDS,
    Decision,
    DecisionRecord,
    EmotionalState,
    FairnessJudgment,
    PersonaName,
    RoundContext,
    StrategyMode,
)
from .base import Agent

LABEL_FIELDS = {
    "emotional_state": EmotionalState,
    "strategy_mode": StrategyMode,
    "fairness_judgment": FairnessJudgment,
}

_MAX_REJECTIONS = 100


@dataclass(frozen=True)
class ScoreProfile:
    mean: float
    spread: float


@dataclass(frozen=True)
class SimulantPolicy:
    """Sampling distributions for one persona's decisions."""
    persona: PersonaName
    continue_prob_schedule: Tuple[float, ...]  # entry k is round k+1; the last repeats
    bet_fraction_mean: float
    bet_fraction_spread: float
    score_means: Mapping[str, ScoreProfile]
    label_distribution: Mapping[str, Mapping[str, float]]
    stop_shift: Mapping[str, float] = field(default_factory=dict)
    hot_hand_boost: float = 1.0
    fairness_sensitivity: float = 0.0

    def __post_init__(self):
        if not self.continue_prob_schedule:
            raise ValueError("continue_prob_schedule must have at least one entry")
        for p in self.continue_prob_schedule:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"Continue probability {p} outside [0, 1]")
        if not 0.0 < self.bet_fraction_mean <= 1.0 or self.bet_fraction_spread < 0:
            raise ValueError("bet fraction mean must lie in (0, 1] with a non-negative spread")
        missing = set(SCORE_FIELDS) - set(self.score_means)
        if missing:
            raise ValueError(f"score_means lacks {sorted(missing)}")
        for name, enum_cls in LABEL_FIELDS.items():
            weights = self.label_distribution.get(name)
            if not weights:
                raise ValueError(f"label_distribution lacks {name}")
            for label, weight in weights.items():
                enum_cls(label)
                if weight < 0:
                    raise ValueError(f"{name}: negative weight for {label}")
            if abs(sum(weights.values()) - 1.0) > 1e-9:
                raise ValueError(f"{name}: label probabilities must sum to 1")
        if self.hot_hand_boost <= 0:
            raise ValueError("hot_hand_boost must be positive")

    def continue_probability(self, round_index: int) -> float:
        schedule = self.continue_prob_schedule
        return schedule[min(round_index, len(schedule)) - 1]


def _truncated_normal(
    rng: np.random.Generator, mean: float, spread: float, low: float, high: float
) -> float:
    if spread == 0:
        return min(high, max(low, mean))
    for _ in range(_MAX_REJECTIONS):
        value = rng.normal(mean, spread)
        if low <= value <= high:
            return float(value)
    return float(min(high, max(low, mean)))


def simulant_decide(
    policy: SimulantPolicy, context: RoundContext, rng: np.random.Generator
) -> DecisionRecord:
    """Sample one decision from ``policy``.

    Draws are taken in a fixed order (decision, bet fraction, scores, labels)
    so that the same generator state always yields the same record.
    """
    playing = rng.random() < policy.continue_probability(context.round_index)
    decision = Decision.PLAY if playing else Decision.STOP

    fraction = _truncated_normal(
        rng, policy.bet_fraction_mean, policy.bet_fraction_spread, 0.001, 1.0
    )
    recent = context.history[-2:]
    if len(recent) == 2 and all(entry.won for entry in recent):
        fraction = min(1.0, fraction * policy.hot_hand_boost)
    if playing:
        balance = context.current_balance
        stake = to_money(balance * Decimal(str(round(fraction, 6))))
        bet = min(balance, max(CENT, stake))
    else:
        bet = to_money(0)

    observed_win_rate = (
        sum(entry.won for entry in context.history) / len(context.history)
        if context.history else 0.5
    )
    scores: Dict[str, float] = {}
    for name in SCORE_FIELDS:
        profile = policy.score_means[name]
        mean = profile.mean
        if not playing:
            mean += policy.stop_shift.get(name, 0.0)
        if name == "fairness_score":
            mean += policy.fairness_sensitivity * (observed_win_rate - 0.5) * 100.0
        if name in BOUNDED_SCORES:
            scores[name] = float(round(_truncated_normal(rng, mean, profile.spread, 0.0, 100.0)))
        else:
            scores[name] = round(float(rng.normal(mean, profile.spread)), 2)

    labels = {}
    for name, enum_cls in LABEL_FIELDS.items():
        weights = policy.label_distribution[name]
        # enum order, not mapping order, fixes which index each draw maps to
        options = [member for member in enum_cls if member.value in weights]
        probabilities = np.array([weights[member.value] for member in options], dtype=float)
        labels[name] = options[int(rng.choice(len(options), p=probabilities / probabilities.sum()))]

    return DecisionRecord(
        decision=decision,
        bet=bet,
        reasoning=(
            f"Scripted {policy.persona.value} policy chose {decision.value} "
            f"in round {context.round_index}."
        ),
        **scores,
        **labels,
    )


class SimulantAgent(Agent):
    """Agent that answers from a SimulantPolicy instead of a model."""

    def __init__(
        self,
        policy: SimulantPolicy,
        reprompt_budget: int = 2,
        prompt_version: str = PROMPT_VERSION,
    ):
        super().__init__(f"simulant:{policy.persona.value}", reprompt_budget, prompt_version)
        self.policy = policy

    def reply(
        self,
        context: RoundContext,
        messages: List[Dict[str, str]],
        rng: np.random.Generator,
    ) -> Tuple[str, float]:
        # Rendered through the wire format so simulants exercise the same parser as models
        return simulant_decide(self.policy, context, rng).to_json(), 0.0


# Shifts applied to the score means on STOP rounds
_STOP_SHIFT = {
    "risk_score": -8.0,
    "confidence": 6.0,
    "fairness_score": -5.0,
    "reward_expectation": -10.0,
    "uncertainty": 12.0,
}

_JUDGMENTS = {"UNCERTAIN": 0.85, "LIKELY_FAIR": 0.10, "LIKELY_BIASED": 0.05}


def _default_policies() -> Dict[PersonaName, SimulantPolicy]:
    return {
        PersonaName.RICH: SimulantPolicy(
            persona=PersonaName.RICH,
            continue_prob_schedule=(0.10,),
            bet_fraction_mean=0.01,
            bet_fraction_spread=0.003,
            score_means={
                "risk_score": ScoreProfile(17.0, 14.0),
                "confidence": ScoreProfile(75.0, 10.0),
                "fairness_score": ScoreProfile(55.0, 8.0),
                "reward_expectation": ScoreProfile(0.0, 5.0),
                "uncertainty": ScoreProfile(35.0, 12.0),
            },
            label_distribution={
                "emotional_state": {"CAUTIOUS": 0.90, "ANALYTICAL": 0.08, "CURIOUS": 0.02},
                "strategy_mode": {"RISK_AVERSE": 0.92, "RISK_NEUTRAL": 0.06, "EXPLORATION": 0.02},
                "fairness_judgment": _JUDGMENTS,
            },
            stop_shift=_STOP_SHIFT,
            fairness_sensitivity=0.3,
        ),
        PersonaName.MIDDLE: SimulantPolicy(
            persona=PersonaName.MIDDLE,
            continue_prob_schedule=(0.875,),
            bet_fraction_mean=0.045,
            bet_fraction_spread=0.012,
            score_means={
                "risk_score": ScoreProfile(40.0, 9.6),
                "confidence": ScoreProfile(62.0, 9.0),
                "fairness_score": ScoreProfile(56.0, 8.0),
                "reward_expectation": ScoreProfile(1.0, 6.0),
                "uncertainty": ScoreProfile(45.0, 10.0),
            },
            label_distribution={
                "emotional_state": {
                    "CAUTIOUS": 0.75, "ANALYTICAL": 0.15, "CURIOUS": 0.06,
                    "CONFIDENT": 0.03, "FRUSTRATED": 0.01,
                },
                "strategy_mode": {
                    "RISK_AVERSE": 0.70, "RISK_NEUTRAL": 0.20,
                    "EXPLORATION": 0.08, "RISK_SEEKING": 0.02,
                },
                "fairness_judgment": _JUDGMENTS,
            },
            stop_shift=_STOP_SHIFT,
            hot_hand_boost=1.2,
            fairness_sensitivity=0.3,
        ),
        PersonaName.POOR: SimulantPolicy(
            persona=PersonaName.POOR,
            continue_prob_schedule=(0.99,),
            bet_fraction_mean=0.135,
            bet_fraction_spread=0.03,
            score_means={
                "risk_score": ScoreProfile(63.0, 6.0),
                "confidence": ScoreProfile(55.0, 8.0),
                "fairness_score": ScoreProfile(55.0, 8.0),
                "reward_expectation": ScoreProfile(2.5, 5.0),
                "uncertainty": ScoreProfile(50.0, 9.0),
            },
            label_distribution={
                "emotional_state": {
                    "CURIOUS": 0.55, "CAUTIOUS": 0.35, "CONFIDENT": 0.05,
                    "FRUSTRATED": 0.03, "ANALYTICAL": 0.02,
                },
                "strategy_mode": {
                    "RISK_SEEKING": 0.80, "EXPLORATION": 0.12,
                    "RISK_NEUTRAL": 0.06, "RISK_AVERSE": 0.02,
                },
                "fairness_judgment": _JUDGMENTS,
            },
            stop_shift=_STOP_SHIFT,
            fairness_sensitivity=0.3,
        ),
    }


def _null_policies() -> Dict[PersonaName, SimulantPolicy]:
    shared = dict(
        continue_prob_schedule=(0.85,),
        bet_fraction_mean=0.05,
        bet_fraction_spread=0.01,
        score_means={
            "risk_score": ScoreProfile(45.0, 10.0),
            "confidence": ScoreProfile(60.0, 10.0),
            "fairness_score": ScoreProfile(55.0, 8.0),
            "reward_expectation": ScoreProfile(0.0, 5.0),
            "uncertainty": ScoreProfile(45.0, 10.0),
        },
        label_distribution={
            "emotional_state": {name.value: 0.2 for name in EmotionalState},
            "strategy_mode": {name.value: 0.25 for name in StrategyMode},
            "fairness_judgment": {"UNCERTAIN": 0.5, "LIKELY_FAIR": 0.25, "LIKELY_BIASED": 0.25},
        },
    )
    return {persona: SimulantPolicy(persona=persona, **shared) for persona in PersonaName}


POLICY_SETS = {
    "default": _default_policies,
    "null": _null_policies,
}


def policy_set(name: str) -> Dict[PersonaName, SimulantPolicy]:
    """Return the named set of per-persona policies."""
    try:
        return POLICY_SETS[name]()
    except KeyError:
        valid = ", ".join(sorted(POLICY_SETS))
        raise ValueError(
            f"Unknown simulant policy set {name!r} (expected one of: {valid})"
        ) from None
