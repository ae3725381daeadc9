"""Tests for the environment module."""

from decimal import Decimal

import numpy as np
import pytest

from wagerbench.environment import (
    InvalidBet,
    MachineConfig,
    MachineConfigError,
    MachineKind,
    MachineState,
    apply_outcome,
    effective_win_probability,
    format_money,
    simulate_win_frequency,
    spin,
    to_money,
)


@pytest.fixture
def streak():
    """Default streak machine at session start."""
    return MachineState(MachineConfig.for_kind(MachineKind.STREAK))


def test_default_configurations():
    fair = MachineConfig.for_kind("fair")
    biased = MachineConfig.for_kind(MachineKind.BIASED_LOW)
    streak = MachineConfig.for_kind("STREAK")
    assert (fair.base_win_prob, fair.streak_increment, fair.streak_cap) == (0.50, 0.0, 0.50)
    assert (biased.base_win_prob, biased.streak_cap) == (0.35, 0.35)
    assert (streak.base_win_prob, streak.streak_increment, streak.streak_cap) == (0.40, 0.05, 0.80)
    assert {c.payout_multiplier for c in (fair, biased, streak)} == {2.0}


def test_invalid_configuration_rejected():
    with pytest.raises(MachineConfigError):
        MachineConfig(MachineKind.STREAK, base_win_prob=0.9, streak_increment=0.05, streak_cap=0.8)
    with pytest.raises(MachineConfigError):
        MachineConfig(MachineKind.FAIR, base_win_prob=0.5, streak_increment=0.05)


def test_overrides_revalidate():
    fair = MachineConfig.for_kind(MachineKind.FAIR).with_overrides(base_win_prob=0.6)
    assert fair.streak_cap == 0.6
    with pytest.raises(MachineConfigError):
        MachineConfig.for_kind(MachineKind.STREAK).with_overrides(streak_cap=1.5)


class TestEffectiveProbability:
    def test_fair_ignores_losses(self):
        state = MachineState(MachineConfig.for_kind(MachineKind.FAIR), consecutive_losses=7)
        assert effective_win_probability(state) == 0.50

    @pytest.mark.parametrize(
        "losses, expected", [(0, 0.40), (1, 0.45), (3, 0.55), (8, 0.80), (10, 0.80), (50, 0.80)]
    )
    def test_streak_table(self, streak, losses, expected):
        state = MachineState(streak.config, consecutive_losses=losses)
        assert effective_win_probability(state) == expected

    def test_streak_is_monotone_and_capped(self, streak):
        values = [
            effective_win_probability(MachineState(streak.config, consecutive_losses=k))
            for k in range(30)
        ]
        assert values == sorted(values)
        assert max(values) == 0.80


class TestSpin:
    def test_win_resets_streak(self, streak):
        state = MachineState(streak.config, consecutive_losses=2)
        outcome, after = spin(state, 5, 0.49)
        assert outcome.won
        assert outcome.effective_prob_used == 0.50
        assert outcome.balance_delta == Decimal("5.00")
        assert after.consecutive_losses == 0

    def test_boundary_draw_loses(self):
        state = MachineState(MachineConfig.for_kind(MachineKind.FAIR))
        outcome, after = spin(state, 5, 0.50)
        assert not outcome.won
        assert outcome.balance_delta == Decimal("-5.00")
        assert after.consecutive_losses == 1

    def test_biased_low_threshold(self):
        state = MachineState(MachineConfig.for_kind(MachineKind.BIASED_LOW))
        outcome, _ = spin(state, 10, 0.34)
        assert outcome.won

    def test_non_positive_bet(self, streak):
        with pytest.raises(InvalidBet):
            spin(streak, 0, 0.1)

    def test_state_is_not_mutated(self, streak):
        spin(streak, 5, 0.99)
        assert streak.consecutive_losses == 0

    def test_deterministic_sequences(self, streak):
        def play(seed):
            rng = np.random.default_rng(seed)
            state, results = streak, []
            for _ in range(200):
                outcome, state = spin(state, 1, rng.random())
                results.append((outcome.won, outcome.effective_prob_used))
            return results

        assert play(11) == play(11)


class TestApplyOutcome:
    def test_win_and_loss(self):
        assert apply_outcome(50, 5, True) == Decimal("55.00")
        assert apply_outcome(50, 5, False) == Decimal("45.00")

    def test_bankruptcy_boundary(self):
        assert apply_outcome(50, 50, False) == Decimal("0.00")

    def test_over_balance_rejected(self):
        with pytest.raises(InvalidBet):
            apply_outcome(50, 50.01, True)

    def test_conservation_over_a_session(self):
        rng = np.random.default_rng(3)
        state = MachineState(MachineConfig.for_kind(MachineKind.STREAK))
        balance = start = to_money(500)
        total = Decimal("0")
        for _ in range(50):
            bet = to_money(min(balance, to_money(rng.uniform(1, 40))))
            if bet <= 0:
                break
            outcome, state = spin(state, bet, rng.random())
            balance = apply_outcome(balance, bet, outcome.won)
            total += outcome.balance_delta
        assert balance == start + total


@pytest.mark.parametrize(
    "kind, losses",
    [(MachineKind.FAIR, 0), (MachineKind.BIASED_LOW, 0), (MachineKind.STREAK, 0),
     (MachineKind.STREAK, 3), (MachineKind.STREAK, 9)],
)
def test_monte_carlo_win_frequency(kind, losses):
    state = MachineState(MachineConfig.for_kind(kind), consecutive_losses=losses)
    p = effective_win_probability(state)
    n = 1_000_000
    frequency = simulate_win_frequency(state, n, np.random.default_rng(2024))
    sigma = (p * (1 - p) / n) ** 0.5
    assert abs(frequency - p) <= 3 * sigma


def test_money_helpers():
    assert to_money(0.1) == Decimal("0.10")
    assert to_money("2.675") == Decimal("2.68")
    assert format_money(10000) == "$10,000"
    assert format_money(Decimal("52.5")) == "$52.50"
