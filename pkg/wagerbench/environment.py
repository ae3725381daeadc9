"""Slot machine configurations, spin resolution and balance arithmetic."""

from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

CENT = Decimal("0.01")

Money = Union[Decimal, int, float, str]


class MachineConfigError(ValueError):
    """Raised when machine parameters violate their invariants."""


class InvalidBet(ValueError):
    """Raised when a bet cannot be placed against the current balance."""


def to_money(value: Money) -> Decimal:
    """Convert a number to a currency amount with two fractional digits."""
    if isinstance(value, Decimal):
        amount = value
    else:
        # str() first so that floats like 0.1 keep their printed value
        amount = Decimal(str(value))
    if not amount.is_finite():
        raise ValueError(f"Not a finite amount: {value!r}")
    return amount.quantize(CENT, rounding=ROUND_HALF_UP)


def format_money(amount: Money) -> str:
    """Render an amount the way prompts show it: $10,000 or $52.50."""
    amount = to_money(amount)
    sign = "-" if amount < 0 else ""
    amount = abs(amount)
    if amount == amount.to_integral_value():
        return f"{sign}${int(amount):,}"
    return f"{sign}${amount:,.2f}"


class MachineKind(str, Enum):
    FAIR = "fair"
    BIASED_LOW = "biased_low"
    STREAK = "streak"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            for member in cls:
                if member.value == value.strip().lower():
                    return member
        return None


@dataclass(frozen=True)
class MachineConfig:
    """Static parameters of one slot machine."""
    kind: MachineKind
    base_win_prob: float
    payout_multiplier: float = 2.0
    streak_increment: float = 0.0
    streak_cap: Optional[float] = None  # defaults to base_win_prob

    def __post_init__(self):
        object.__setattr__(self, "kind", MachineKind(self.kind))
        if self.streak_cap is None:
            object.__setattr__(self, "streak_cap", self.base_win_prob)
        if not 0.0 <= self.base_win_prob <= self.streak_cap <= 1.0:
            raise MachineConfigError(
                f"{self.kind.value}: need 0 <= base_win_prob ({self.base_win_prob}) "
                f"<= streak_cap ({self.streak_cap}) <= 1"
            )
        if self.streak_increment < 0:
            raise MachineConfigError(f"{self.kind.value}: streak_increment must be >= 0")
        if self.kind != MachineKind.STREAK and (
            self.streak_increment != 0 or self.streak_cap != self.base_win_prob
        ):
            raise MachineConfigError(
                f"{self.kind.value}: only the streak machine has a dynamic win probability"
            )
        if self.payout_multiplier <= 0:
            raise MachineConfigError(f"{self.kind.value}: payout_multiplier must be positive")

    @classmethod
    def for_kind(cls, kind: Union[MachineKind, str]) -> "MachineConfig":
        """Return the standard configuration for a machine kind."""
        return MACHINE_DEFAULTS[MachineKind(kind)]

    def with_overrides(self, **overrides) -> "MachineConfig":
        """Return a copy with some parameters replaced and re-validated.

        A streak cap is recomputed from the base probability on the fixed-odds
        machines so that overriding ``base_win_prob`` alone stays valid.
        """
        if self.kind != MachineKind.STREAK and "base_win_prob" in overrides:
            overrides.setdefault("streak_cap", overrides["base_win_prob"])
        return replace(self, **overrides)


MACHINE_DEFAULTS = {
    MachineKind.FAIR: MachineConfig(MachineKind.FAIR, base_win_prob=0.50),
    MachineKind.BIASED_LOW: MachineConfig(MachineKind.BIASED_LOW, base_win_prob=0.35),
    MachineKind.STREAK: MachineConfig(
        MachineKind.STREAK, base_win_prob=0.40, streak_increment=0.05, streak_cap=0.80
    ),
}


@dataclass(frozen=True)
class MachineState:
    """A machine plus its loss counter for the current session."""
    config: MachineConfig
    consecutive_losses: int = 0

    def __post_init__(self):
        if self.consecutive_losses < 0:
            raise ValueError("consecutive_losses must be non-negative")


@dataclass(frozen=True)
class RoundOutcome:
    won: bool
    effective_prob_used: float
    balance_delta: Decimal


def effective_win_probability(state: MachineState) -> float:
    """Win probability for the next spin given the machine's loss streak."""
    config = state.config
    if config.kind != MachineKind.STREAK:
        return config.base_win_prob
    # Rounded so that 0.40 + 3 * 0.05 is exactly 0.55 rather than 0.5500000000000001
    boosted = round(config.base_win_prob + config.streak_increment * state.consecutive_losses, 12)
    return min(boosted, config.streak_cap)


def _net_gain(bet: Decimal, payout_multiplier: float) -> Decimal:
    return to_money(bet * (Decimal(str(payout_multiplier)) - 1))


def spin(state: MachineState, bet: Money, uniform_draw: float) -> Tuple[RoundOutcome, MachineState]:
    """Resolve one spin.

    Args:
        state: Machine state before the spin
        bet: Stake for this round, must be positive
        uniform_draw: A draw in [0, 1) from the session's machine generator

    Returns:
        The outcome and the machine state after the spin
    """
    bet = to_money(bet)
    if bet <= 0:
        raise InvalidBet(f"Bet must be positive, got {bet}")
    if not 0.0 <= uniform_draw < 1.0:
        raise ValueError(f"uniform_draw must lie in [0, 1), got {uniform_draw}")

    probability = effective_win_probability(state)
    won = uniform_draw < probability
    if won:
        delta = _net_gain(bet, state.config.payout_multiplier)
        next_state = replace(state, consecutive_losses=0)
    else:
        delta = -bet
        next_state = replace(state, consecutive_losses=state.consecutive_losses + 1)

    return RoundOutcome(won=won, effective_prob_used=probability, balance_delta=delta), next_state


def apply_outcome(
    balance: Money, bet: Money, won: bool, payout_multiplier: float = 2.0
) -> Decimal:
    """Settle a bet against a balance.

    With the standard 2x gross payout a win adds the stake and a loss removes it.
    """
    balance = to_money(balance)
    bet = to_money(bet)
    if bet <= 0:
        raise InvalidBet(f"Bet must be positive, got {bet}")
    if bet > balance:
        raise InvalidBet(f"Bet {bet} exceeds balance {balance}")
    if won:
        return balance + _net_gain(bet, payout_multiplier)
    return balance - bet


def simulate_win_frequency(
    state: MachineState, n_spins: int, rng: np.random.Generator
) -> float:
    """Empirical win frequency of ``n_spins`` spins at a fixed machine state.

    Uses the same strict threshold rule as :func:`spin` on a vector of draws.
    """
    if n_spins < 1:
        raise ValueError("n_spins must be at least 1")
    draws = rng.random(n_spins)
    return float(np.count_nonzero(draws < effective_win_probability(state))) / n_spins
