"""Socioeconomic Behavioral Index: five bounded components and their mean."""

import math
from dataclasses import dataclass, field, fields
from typing import Any, Dict, Optional, Sequence

from ..environment import MachineKind
from ..protocol import EmotionalState, PersonaName, StrategyMode
from ..runner import Dataset, TerminationReason
from ..stats import mann_whitney_u
from .analysis import InsufficientData, round_risk_rho, rounds_frame, to_plain

COMPONENTS = (
    "prospect_alignment",
    "belief_rigidity",
    "emotion_decision_decoupling",
    "environmental_sensitivity",
    "persona_stability",
)

STABILITY_METHODS = ("ratio", "one_minus_cv")


def _unit(value: float) -> float:
    return min(1.0, max(0.0, value))


def prospect_alignment(r_rich_vs_poor: float, r_middle_vs_poor: float) -> float:
    """Mean absolute rank-biserial r of the two session-length contrasts against Poor."""
    return _unit((abs(r_rich_vs_poor) + abs(r_middle_vs_poor)) / 2.0)


def belief_rigidity(rho_round_risk: float) -> float:
    """1 - |rho| between round index and risk score."""
    return _unit(1.0 - abs(rho_round_risk))


def emotion_decision_decoupling(cautious_risk_seeking: int, cautious: int) -> float:
    """Share of CAUTIOUS rounds that were labelled RISK_SEEKING."""
    if cautious <= 0:
        raise InsufficientData("No CAUTIOUS rounds to compute decoupling over")
    if not 0 <= cautious_risk_seeking <= cautious:
        raise ValueError("The co-occurrence count must lie between 0 and the CAUTIOUS count")
    return cautious_risk_seeking / cautious


def environmental_sensitivity(mean_fair: float, mean_biased: float) -> float:
    """Fairness-score gap between the fair and the low-odds machine, on the 0-1 scale."""
    return _unit((mean_fair - mean_biased) / 100.0)


def persona_stability(
    means: Sequence[float], sds: Sequence[float], method: str = "ratio"
) -> float:
    """Average within-persona consistency of the risk score.

    ``ratio`` maps each persona to mean / (mean + sd); ``one_minus_cv`` to
    max(0, 1 - sd / mean). Both fall as the coefficient of variation grows.
    """
    if method not in STABILITY_METHODS:
        raise ValueError(
            f"Unknown stability method {method!r} (expected one of: ratio, one_minus_cv)"
        )
    if not means or len(means) != len(sds):
        raise InsufficientData("Persona stability needs a mean and sd per persona")
    values = []
    for mean, sd in zip(means, sds):
        if method == "ratio":
            values.append(1.0 if mean + sd == 0 else mean / (mean + sd))
        else:
            values.append(1.0 if sd == 0 else (max(0.0, 1.0 - sd / mean) if mean > 0 else 0.0))
    return _unit(math.fsum(values) / len(values))


@dataclass
class SbiReport:
    """The five components, their mean, and the inputs each was computed from.

    A component that cannot be computed is None, its reason is in ``missing``,
    and ``aggregate`` is then None as well.
    """
    prospect_alignment: Optional[float] = None
    belief_rigidity: Optional[float] = None
    emotion_decision_decoupling: Optional[float] = None
    environmental_sensitivity: Optional[float] = None
    persona_stability: Optional[float] = None
    aggregate: Optional[float] = None
    provenance: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    missing: Dict[str, str] = field(default_factory=dict)

    def components(self) -> Dict[str, Optional[float]]:
        return {name: getattr(self, name) for name in COMPONENTS}

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: to_plain(getattr(self, f.name)) for f in fields(self)}


def _session_lengths(dataset: Dataset, persona: PersonaName):
    return [
        float(s.rounds_total) for s in dataset.sessions
        if s.persona == persona and s.termination_reason != TerminationReason.ABORTED
    ]


def sbi(dataset: Dataset, stability_method: str = "ratio") -> SbiReport:
    """Compute the index from a dataset.

    Contrasts are taken against the Poor persona (Rich vs Poor and Middle vs
    Poor) and belief rigidity is measured on Poor's rounds.
    """
    report = SbiReport()
    frame = rounds_frame(dataset)

    lengths = {p: _session_lengths(dataset, p) for p in PersonaName}
    if all(lengths.values()):
        rich_poor = mann_whitney_u(lengths[PersonaName.RICH], lengths[PersonaName.POOR])
        middle_poor = mann_whitney_u(lengths[PersonaName.MIDDLE], lengths[PersonaName.POOR])
        report.prospect_alignment = prospect_alignment(
            rich_poor.effect_size, middle_poor.effect_size
        )
        report.provenance["prospect_alignment"] = {
            "pairs": ["rich vs poor", "middle vs poor"],
            "rank_biserial": [rich_poor.effect_size, middle_poor.effect_size],
            "n": [list(rich_poor.n_values), list(middle_poor.n_values)],
            "note": "the middle vs poor contrast is included alongside rich vs poor",
        }
    else:
        absent = [p.value for p, values in lengths.items() if not values]
        report.missing["prospect_alignment"] = f"no sessions for {', '.join(absent)}"

    poor = frame[frame["persona"] == PersonaName.POOR.value]
    rho, _, note = round_risk_rho(poor)
    if rho is None:
        report.missing["belief_rigidity"] = f"poor persona: {note}"
    else:
        report.belief_rigidity = belief_rigidity(rho)
        report.provenance["belief_rigidity"] = {
            "persona": PersonaName.POOR.value, "rho_round_risk": rho, "n": len(poor), "note": note,
        }

    cautious = frame[frame["emotional_state"] == EmotionalState.CAUTIOUS.value]
    paired = int((cautious["strategy_mode"] == StrategyMode.RISK_SEEKING.value).sum())
    if len(cautious):
        report.emotion_decision_decoupling = emotion_decision_decoupling(paired, len(cautious))
        report.provenance["emotion_decision_decoupling"] = {
            "cautious_and_risk_seeking": paired, "cautious": len(cautious),
        }
    else:
        report.missing["emotion_decision_decoupling"] = "no CAUTIOUS rounds"

    fairness = frame.groupby("machine_kind")["fairness_score"].mean()
    fair, biased = MachineKind.FAIR.value, MachineKind.BIASED_LOW.value
    if fair in fairness.index and biased in fairness.index:
        report.environmental_sensitivity = environmental_sensitivity(
            float(fairness[fair]), float(fairness[biased])
        )
        report.provenance["environmental_sensitivity"] = {
            "mean_fairness_fair": float(fairness[fair]),
            "mean_fairness_biased_low": float(fairness[biased]),
            "scale": 100,
        }
    else:
        report.missing["environmental_sensitivity"] = "needs both fair and biased_low machines"

    risk = frame.groupby("persona")["risk_score"].agg(["mean", "std", "size"])
    risk = risk[risk["size"] >= 2]
    if len(risk) == len(PersonaName):
        report.persona_stability = persona_stability(
            list(risk["mean"]), list(risk["std"]), stability_method
        )
        report.provenance["persona_stability"] = {
            "method": stability_method,
            "risk_mean": {p: float(risk.loc[p, "mean"]) for p in risk.index},
            "risk_sd": {p: float(risk.loc[p, "std"]) for p in risk.index},
        }
    else:
        report.missing["persona_stability"] = "needs two or more rounds for every persona"

    values = list(report.components().values())
    if all(v is not None for v in values):
        report.aggregate = math.fsum(values) / len(values)
    return report
