"""Analysis battery and the Socioeconomic Behavioral Index."""

from .analysis import (
    AnalysisReport,
    InsufficientData,
    analyze,
    emotion_strategy_analysis,
    fairness_analysis,
    label_distributions,
    learning_curves,
    per_round_score_analysis,
    psych_profile,
    risk_bet_correlation,
    rounds_frame,
    session_length_analysis,
    session_outcomes,
    stop_trigger_analysis,
    streak_effect,
)
from .sbi import (
    SbiReport,
    belief_rigidity,
    emotion_decision_decoupling,
    environmental_sensitivity,
    persona_stability,
    prospect_alignment,
    sbi,
)

__all__ = [
    "AnalysisReport",
    "InsufficientData",
    "SbiReport",
    "analyze",
    "belief_rigidity",
    "emotion_decision_decoupling",
    "emotion_strategy_analysis",
    "environmental_sensitivity",
    "fairness_analysis",
    "label_distributions",
    "learning_curves",
    "per_round_score_analysis",
    "persona_stability",
    "prospect_alignment",
    "psych_profile",
    "risk_bet_correlation",
    "rounds_frame",
    "sbi",
    "session_length_analysis",
    "session_outcomes",
    "stop_trigger_analysis",
    "streak_effect",
]
