"""Analysis battery over a loaded dataset."""

from dataclasses import dataclass, field, fields, is_dataclass
from decimal import Decimal
from enum import Enum
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..environment import MachineKind
from ..protocol import (
    PERSONAS,
    SCORE_FIELDS,
    Decision,
    EmotionalState,
    FairnessJudgment,
    PersonaName,
    StrategyMode,
)
from ..runner import Dataset, TerminationReason, condition_id
from ..stats import (
    Descriptives,
    EffectKind,
    StatsError,
    TestResult,
    bonferroni_threshold,
    chi_square_independence,
    cohens_d_avgvar,
    describe,
    interpret_effect,
    kruskal_wallis,
    mann_whitney_u,
    one_way_anova,
    point_biserial,
    spearman,
)

ALPHA = 0.05

# Accepted names for per_round_score_analysis
SCORE_ALIASES = {
    "risk": "risk_score",
    "risk_score": "risk_score",
    "confidence": "confidence",
    "confidence_score": "confidence",
    "fairness": "fairness_score",
    "fairness_score": "fairness_score",
    "uncertainty": "uncertainty",
    "uncertainty_score": "uncertainty",
    "reward_expectation": "reward_expectation",
    "bet": "bet",
    "bet_amount": "bet",
}

AFTER_WINS = "AFTER_2PLUS_WINS"
AFTER_LOSSES = "AFTER_2PLUS_LOSSES"
OTHER = "OTHER"
STREAK_BINS = (AFTER_WINS, AFTER_LOSSES, OTHER)

INCOHERENT_CELL = (EmotionalState.CAUTIOUS.value, StrategyMode.RISK_SEEKING.value)


class InsufficientData(ValueError):
    """An analysis precondition is not met by the dataset."""


def to_plain(obj: Any) -> Any:
    """Convert report objects into JSON-compatible builtins."""
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {
            (k.value if isinstance(k, Enum) else str(k)): to_plain(v) for k, v in obj.items()
        }
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Decimal):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def rounds_frame(dataset: Dataset) -> pd.DataFrame:
    """One row per logged round with numeric money columns."""
    columns = [
        "persona", "machine_kind", "condition_id", "iteration", "round_index", "decision",
        "bet", "won", "balance_before", "balance_after", *SCORE_FIELDS,
        "emotional_state", "strategy_mode", "fairness_judgment",
    ]
    rows = [
        {
            "persona": r.persona.value,
            "machine_kind": r.machine_kind.value,
            "condition_id": r.condition_id,
            "iteration": r.iteration,
            "round_index": r.round_index,
            "decision": r.decision.value,
            "bet": float(r.bet),
            "won": r.won,
            "balance_before": float(r.balance_before),
            "balance_after": float(r.balance_after),
            **{name: float(getattr(r, name)) for name in SCORE_FIELDS},
            "emotional_state": r.emotional_state.value,
            "strategy_mode": r.strategy_mode.value,
            "fairness_judgment": r.fairness_judgment.value,
        }
        for r in dataset.rounds
    ]
    frame = pd.DataFrame(rows, columns=columns)
    frame["stop"] = (frame["decision"] == Decision.STOP.value).astype(int)
    return frame


def sessions_frame(dataset: Dataset) -> pd.DataFrame:
    return pd.DataFrame([s.to_dict() for s in dataset.sessions])


def _ordered(values, enum_cls) -> List[str]:
    present = set(values)
    return [m.value for m in enum_cls if m.value in present]


def _groups(
    frame: pd.DataFrame, by: str, column: str, order: Sequence[str]
) -> Dict[str, List[float]]:
    grouped = {
        key: list(sub[column].astype(float)) for key, sub in frame.groupby(by, sort=False)
    }
    return {key: grouped[key] for key in order if key in grouped}


@dataclass
class PairwiseComparison:
    """One pairwise test with its Bonferroni verdict."""
    group_a: str
    group_b: str
    result: TestResult
    alpha: float
    significant: bool
    magnitude: str


def _pairwise_mwu(groups: Dict[str, List[float]]) -> List[PairwiseComparison]:
    pairs = list(combinations(groups, 2))
    if not pairs:
        return []
    alpha = bonferroni_threshold(ALPHA, len(pairs))
    comparisons = []
    for a, b in pairs:
        result = mann_whitney_u(groups[a], groups[b])
        comparisons.append(PairwiseComparison(
            group_a=a,
            group_b=b,
            result=result,
            alpha=alpha,
            significant=result.p_value < alpha,
            magnitude=interpret_effect(EffectKind.RANK_BISERIAL, result.effect_size),
        ))
    return comparisons


@dataclass
class SessionLengthTable:
    by_persona: Dict[str, Descriptives]
    kruskal: TestResult
    pairwise: List[PairwiseComparison]
    by_condition: Dict[str, Descriptives] = field(default_factory=dict)
    net_profit_by_condition: Dict[str, Descriptives] = field(default_factory=dict)
    aborted_excluded: int = 0


def session_length_analysis(dataset: Dataset) -> SessionLengthTable:
    """Session length per persona, Kruskal-Wallis across personas and pairwise Mann-Whitney.

    ABORTED sessions are left out and counted.

    Raises:
        InsufficientData: unless at least two personas have two or more sessions
    """
    sessions = [s for s in dataset.sessions if s.termination_reason != TerminationReason.ABORTED]
    aborted = len(dataset.sessions) - len(sessions)
    groups: Dict[str, List[float]] = {}
    for persona in PersonaName:
        lengths = [float(s.rounds_total) for s in sessions if s.persona == persona]
        if len(lengths) >= 2:
            groups[persona.value] = lengths
    if len(groups) < 2:
        raise InsufficientData("Session length analysis needs two personas with >= 2 sessions")

    by_condition: Dict[str, Descriptives] = {}
    net_profit: Dict[str, Descriptives] = {}
    for persona in PersonaName:
        for kind in MachineKind:
            cell = [s for s in sessions if s.persona == persona and s.machine_kind == kind]
            if cell:
                cid = condition_id(persona, kind)
                by_condition[cid] = describe([s.rounds_total for s in cell])
                net_profit[cid] = describe([float(s.net_profit) for s in cell])

    return SessionLengthTable(
        by_persona={name: describe(values) for name, values in groups.items()},
        kruskal=kruskal_wallis(list(groups.values())),
        pairwise=_pairwise_mwu(groups),
        by_condition=by_condition,
        net_profit_by_condition=net_profit,
        aborted_excluded=aborted,
    )


@dataclass
class EffectComparison:
    group_a: str
    group_b: str
    cohens_d: Optional[float]
    magnitude: str
    note: Optional[str] = None


@dataclass
class ScoreTable:
    """Per-persona distribution of one per-round field with omnibus tests."""
    field: str
    by_persona: Dict[str, Descriptives]
    anova: TestResult
    kruskal: TestResult
    pairwise_d: List[EffectComparison]


@dataclass
class BetTable(ScoreTable):
    stake_fraction: Dict[str, Optional[float]] = field(default_factory=dict)
    stake_fraction_by_condition: Dict[str, Optional[float]] = field(default_factory=dict)
    pairwise_mwu: List[PairwiseComparison] = field(default_factory=list)


def _pairwise_d(stats: Dict[str, Descriptives]) -> List[EffectComparison]:
    comparisons = []
    for a, b in combinations(stats, 2):
        da, db = stats[a], stats[b]
        if da.sd is None or db.sd is None:
            comparisons.append(EffectComparison(a, b, None, "undefined", "fewer than two rounds"))
            continue
        try:
            d = cohens_d_avgvar(da.mean, da.sd, db.mean, db.sd)
        except StatsError as e:
            comparisons.append(EffectComparison(a, b, None, "undefined", str(e)))
            continue
        comparisons.append(EffectComparison(a, b, d, interpret_effect(EffectKind.COHENS_D, d)))
    return comparisons


def per_round_score_analysis(dataset: Dataset, field_name: str) -> ScoreTable:
    """Distribution of a score (or the bet) per persona over every logged round.

    Terminal STOP rounds are included, so STOP bets of 0 enter the bet table.

    Raises:
        ValueError: for an unknown field name
        InsufficientData: with fewer than two personas present
    """
    key = SCORE_ALIASES.get(field_name.strip().lower())
    if key is None:
        valid = ", ".join(sorted(SCORE_ALIASES))
        raise ValueError(f"Unknown score field {field_name!r} (expected one of: {valid})")
    frame = rounds_frame(dataset)
    order = _ordered(frame["persona"], PersonaName)
    groups = _groups(frame, "persona", key, order)
    if len(groups) < 2:
        raise InsufficientData(f"{key} analysis needs rounds from at least two personas")

    stats = {name: describe(values) for name, values in groups.items()}
    common = dict(
        field=key,
        by_persona=stats,
        anova=one_way_anova(list(groups.values())),
        kruskal=kruskal_wallis(list(groups.values())),
        pairwise_d=_pairwise_d(stats),
    )
    if key != "bet":
        return ScoreTable(**common)

    stake_fraction = {
        name: stats[name].mean / float(PERSONAS[PersonaName(name)].starting_balance)
        for name in stats
    }
    by_condition: Dict[str, Optional[float]] = {}
    for (persona, kind), sub in frame.groupby(["persona", "machine_kind"], sort=False):
        start = float(PERSONAS[PersonaName(persona)].starting_balance)
        by_condition[condition_id(persona, kind)] = float(sub["bet"].mean()) / start
    by_condition = {
        condition_id(p, k): by_condition[condition_id(p, k)]
        for p in PersonaName for k in MachineKind
        if condition_id(p, k) in by_condition
    }
    return BetTable(
        **common,
        stake_fraction=stake_fraction,
        stake_fraction_by_condition=by_condition,
        pairwise_mwu=_pairwise_mwu(groups),
    )


@dataclass
class StopPredictor:
    field: str
    play_mean: float
    stop_mean: float
    point_biserial: TestResult
    mwu: TestResult


def stop_trigger_analysis(dataset: Dataset) -> List[StopPredictor]:
    """How each score differs between PLAY and STOP rounds.

    The point-biserial codes STOP as 1; the Mann-Whitney compares PLAY (first)
    against STOP.

    Raises:
        InsufficientData: if only one decision class is present
        StatsError: if a score is constant across all rounds
    """
    frame = rounds_frame(dataset)
    if frame["stop"].nunique() < 2:
        raise InsufficientData("Stop-trigger analysis needs both PLAY and STOP rounds")
    play = frame[frame["stop"] == 0]
    stop = frame[frame["stop"] == 1]
    rows = []
    for name in SCORE_FIELDS:
        rows.append(StopPredictor(
            field=name,
            play_mean=float(play[name].mean()),
            stop_mean=float(stop[name].mean()),
            point_biserial=point_biserial(list(frame[name]), list(frame["stop"])),
            mwu=mann_whitney_u(list(play[name]), list(stop[name])),
        ))
    return rows


def _crosstab(frame: pd.DataFrame) -> Dict[str, Dict[str, int]]:
    counts = pd.crosstab(frame["emotional_state"], frame["strategy_mode"])
    counts = counts.reindex(
        index=[e.value for e in EmotionalState],
        columns=[s.value for s in StrategyMode],
        fill_value=0,
    )
    return {
        emotion: {strategy: int(counts.loc[emotion, strategy]) for strategy in counts.columns}
        for emotion in counts.index
    }


def _table_rows(counts: Dict[str, Dict[str, int]]) -> List[List[int]]:
    return [list(row.values()) for row in counts.values()]


@dataclass
class EmotionStratum:
    persona: str
    machine_kind: str
    counts: Dict[str, Dict[str, int]]
    incoherent_count: int
    chi_square: Optional[TestResult] = None
    note: Optional[str] = None


@dataclass
class EmotionStrategyTable:
    counts: Dict[str, Dict[str, int]]
    chi_square: TestResult
    magnitude: str
    strata: List[EmotionStratum]
    incoherent_total: int


def emotion_strategy_analysis(dataset: Dataset) -> EmotionStrategyTable:
    """Emotion x strategy co-occurrence, pooled and per condition.

    ``incoherent_count`` is the number of CAUTIOUS rounds labelled RISK_SEEKING.

    Raises:
        StatsError: when the pooled table has fewer than two non-empty rows or columns
    """
    frame = rounds_frame(dataset)
    if frame.empty:
        raise InsufficientData("No rounds to tabulate")
    counts = _crosstab(frame)
    result = chi_square_independence(_table_rows(counts))
    k = _smaller_dimension(counts)

    strata = []
    for persona in _ordered(frame["persona"], PersonaName):
        for kind in _ordered(frame["machine_kind"], MachineKind):
            sub = frame[(frame["persona"] == persona) & (frame["machine_kind"] == kind)]
            if sub.empty:
                continue
            cell_counts = _crosstab(sub)
            stratum = EmotionStratum(
                persona=persona,
                machine_kind=kind,
                counts=cell_counts,
                incoherent_count=cell_counts[INCOHERENT_CELL[0]][INCOHERENT_CELL[1]],
            )
            try:
                stratum.chi_square = chi_square_independence(_table_rows(cell_counts))
            except StatsError as e:
                stratum.note = str(e)
            strata.append(stratum)

    return EmotionStrategyTable(
        counts=counts,
        chi_square=result,
        magnitude=interpret_effect(EffectKind.CRAMERS_V, result.effect_size, k),
        strata=strata,
        incoherent_total=counts[INCOHERENT_CELL[0]][INCOHERENT_CELL[1]],
    )


def _smaller_dimension(counts: Dict[str, Dict[str, int]]) -> int:
    """min(r - 1, c - 1) of the table that survived empty-row/column removal."""
    rows = sum(1 for row in counts.values() if sum(row.values()) > 0)
    cols = sum(1 for col in zip(*(row.values() for row in counts.values())) if sum(col) > 0)
    return max(1, min(rows - 1, cols - 1))


@dataclass
class RiskBetRow:
    group: str
    n: int
    rho: Optional[float]
    result: Optional[TestResult] = None
    note: Optional[str] = None


def _rho_row(group: str, sub: pd.DataFrame) -> RiskBetRow:
    n = len(sub)
    if n < 3:
        return RiskBetRow(group, n, None, note="insufficient data (fewer than 3 PLAY rounds)")
    try:
        result = spearman(list(sub["risk_score"]), list(sub["bet"]))
    except StatsError as e:
        return RiskBetRow(group, n, None, note=str(e))
    return RiskBetRow(group, n, result.effect_size, result)


def risk_bet_correlation(dataset: Dataset) -> List[RiskBetRow]:
    """Spearman rho between risk score and bet, PLAY rounds only.

    The final ``overall`` row pools the personas whose own rho is defined.
    """
    frame = rounds_frame(dataset)
    play = frame[frame["stop"] == 0]
    rows = []
    defined = []
    for persona in _ordered(frame["persona"], PersonaName):
        row = _rho_row(persona, play[play["persona"] == persona])
        rows.append(row)
        if row.rho is not None:
            defined.append(persona)
    overall = _rho_row("overall", play[play["persona"].isin(defined)])
    overall.note = overall.note or f"pooled over {', '.join(defined)}"
    rows.append(overall)
    return rows


@dataclass
class FairnessTable:
    by_machine: Dict[str, Descriptives]
    judgment_shares: Dict[str, Dict[str, float]]
    anova: TestResult
    pairwise: List[PairwiseComparison]
    fair_minus_biased: Optional[float] = None


def fairness_analysis(dataset: Dataset) -> FairnessTable:
    """Perceived fairness per machine kind.

    Raises:
        InsufficientData: with fewer than two machine kinds present
    """
    frame = rounds_frame(dataset)
    order = _ordered(frame["machine_kind"], MachineKind)
    if len(order) < 2:
        raise InsufficientData("Fairness analysis needs at least two machine kinds")
    groups = _groups(frame, "machine_kind", "fairness_score", order)
    stats = {kind: describe(values) for kind, values in groups.items()}

    shares: Dict[str, Dict[str, float]] = {}
    for kind in order:
        judgments = frame.loc[frame["machine_kind"] == kind, "fairness_judgment"]
        counts = judgments.value_counts()
        shares[kind] = {
            j.value: float(counts.get(j.value, 0)) / len(judgments) for j in FairnessJudgment
        }

    gap = None
    fair, biased = MachineKind.FAIR.value, MachineKind.BIASED_LOW.value
    if fair in stats and biased in stats:
        gap = stats[fair].mean - stats[biased].mean
    return FairnessTable(
        by_machine=stats,
        judgment_shares=shares,
        anova=one_way_anova(list(groups.values())),
        pairwise=_pairwise_mwu(groups),
        fair_minus_biased=gap,
    )


@dataclass
class CurvePoint:
    round_index: int
    n_active: int
    mean_bet: float
    mean_risk: float


@dataclass
class LearningCurve:
    persona: str
    points: List[CurvePoint]
    rho: Optional[float]
    result: Optional[TestResult] = None
    note: Optional[str] = None


def round_risk_rho(
    sub: pd.DataFrame,
) -> Tuple[Optional[float], Optional[TestResult], Optional[str]]:
    """Spearman rho between round index and risk; a constant series counts as 0."""
    if len(sub) < 3:
        return None, None, "fewer than three rounds"
    if sub["risk_score"].nunique() < 2 or sub["round_index"].nunique() < 2:
        return 0.0, None, "constant series; rho undefined, reported as 0"
    result = spearman(list(sub["round_index"]), list(sub["risk_score"]))
    return result.effect_size, result, None


def learning_curves(dataset: Dataset) -> List[LearningCurve]:
    """Per-round mean bet and risk over the sessions still active, per persona."""
    frame = rounds_frame(dataset)
    curves = []
    for persona in _ordered(frame["persona"], PersonaName):
        sub = frame[frame["persona"] == persona]
        per_round = sub.groupby("round_index").agg(
            n_active=("iteration", "size"),
            mean_bet=("bet", "mean"),
            mean_risk=("risk_score", "mean"),
        )
        points = [
            CurvePoint(int(idx), int(row.n_active), float(row.mean_bet), float(row.mean_risk))
            for idx, row in per_round.sort_index().iterrows()
        ]
        rho, result, note = round_risk_rho(sub)
        curves.append(LearningCurve(persona, points, rho, result, note))
    return curves


def streak_bin(previous: Sequence[Optional[bool]]) -> str:
    """Bin a PLAY round by the outcomes of the two rounds before it."""
    if len(previous) < 2 or any(outcome is None for outcome in previous[-2:]):
        return OTHER
    last_two = previous[-2:]
    if all(last_two):
        return AFTER_WINS
    if not any(last_two):
        return AFTER_LOSSES
    return OTHER


@dataclass
class StreakCell:
    persona: str
    bin: str
    n: int
    mean_bet: float
    median_bet: float


def streak_effect(dataset: Dataset) -> List[StreakCell]:
    """Mean and median bet after two wins, after two losses, and otherwise.

    Empty bins are left out rather than reported as zero.

    Raises:
        InsufficientData: if no PLAY round has two earlier rounds
    """
    binned: Dict[Tuple[str, str], List[float]] = {}
    has_history = False
    outcomes: Dict[Tuple[str, int], List[Optional[bool]]] = {}
    for r in dataset.rounds:
        previous = outcomes.setdefault((r.condition_id, r.iteration), [])
        if r.decision == Decision.PLAY:
            if len(previous) >= 2:
                has_history = True
            binned.setdefault((r.persona.value, streak_bin(previous)), []).append(float(r.bet))
        previous.append(r.won)
    if not has_history:
        raise InsufficientData("No PLAY round has two earlier rounds to bin on")

    cells = []
    for persona in PersonaName:
        for name in STREAK_BINS:
            bets = binned.get((persona.value, name))
            if bets:
                cells.append(StreakCell(
                    persona.value, name, len(bets), float(np.mean(bets)), float(np.median(bets))
                ))
    return cells


@dataclass
class ConditionOutcomes:
    condition_id: str
    persona: str
    machine_kind: str
    sessions: int
    win_rate: Descriptives
    win_rate_undefined: int
    roi: Descriptives
    win_rates: List[float]
    rois: List[float]


def session_outcomes(dataset: Dataset) -> List[ConditionOutcomes]:
    """Win-rate and ROI distributions per condition.

    Sessions without a PLAY round have no win rate; they are counted, not averaged.
    """
    cells = []
    for persona in PersonaName:
        for kind in MachineKind:
            sessions = [
                s for s in dataset.sessions if s.persona == persona and s.machine_kind == kind
            ]
            if not sessions:
                continue
            win_rates = [s.win_rate for s in sessions if s.win_rate is not None]
            rois = [s.roi for s in sessions]
            cells.append(ConditionOutcomes(
                condition_id=condition_id(persona, kind),
                persona=persona.value,
                machine_kind=kind.value,
                sessions=len(sessions),
                win_rate=describe(win_rates),
                win_rate_undefined=len(sessions) - len(win_rates),
                roi=describe(rois),
                win_rates=win_rates,
                rois=rois,
            ))
    return cells


def psych_profile(dataset: Dataset) -> Dict[str, Dict[str, float]]:
    """Mean of each score field per persona."""
    frame = rounds_frame(dataset)
    means = frame.groupby("persona")[list(SCORE_FIELDS)].mean()
    return {
        persona: {name: float(means.loc[persona, name]) for name in SCORE_FIELDS}
        for persona in _ordered(frame["persona"], PersonaName)
    }


def label_distributions(dataset: Dataset) -> Dict[str, Dict[str, Dict[str, float]]]:
    """Share of every emotional state and strategy mode per persona, zeros included."""
    frame = rounds_frame(dataset)
    result: Dict[str, Dict[str, Dict[str, float]]] = {}
    for persona in _ordered(frame["persona"], PersonaName):
        sub = frame[frame["persona"] == persona]
        entry = {}
        for column, enum_cls in (
            ("emotional_state", EmotionalState),
            ("strategy_mode", StrategyMode),
        ):
            counts = sub[column].value_counts()
            entry[column] = {m.value: float(counts.get(m.value, 0)) / len(sub) for m in enum_cls}
        result[persona] = entry
    return result


@dataclass
class AnalysisReport:
    """Every analysis that could be computed; the rest are listed in ``skipped``."""
    n_rounds: int
    n_sessions: int
    run_id: Optional[str] = None
    session_length_table: Optional[SessionLengthTable] = None
    score_tables: Dict[str, ScoreTable] = field(default_factory=dict)
    bet_table: Optional[BetTable] = None
    stop_predictor_table: Optional[List[StopPredictor]] = None
    emotion_strategy: Optional[EmotionStrategyTable] = None
    risk_bet_correlations: Optional[List[RiskBetRow]] = None
    fairness_table: Optional[FairnessTable] = None
    learning_curves: Optional[List[LearningCurve]] = None
    streak_table: Optional[List[StreakCell]] = None
    session_outcomes: Optional[List[ConditionOutcomes]] = None
    psych_profile: Optional[Dict[str, Dict[str, float]]] = None
    label_distributions: Optional[Dict[str, Dict[str, Dict[str, float]]]] = None
    skipped: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: to_plain(getattr(self, f.name)) for f in fields(self)}


SCORE_TABLE_FIELDS = (
    "risk_score", "confidence", "fairness_score", "uncertainty", "reward_expectation",
)


def analyze(dataset: Dataset) -> AnalysisReport:
    """Run the whole battery; a section whose precondition fails is skipped with its reason."""
    report = AnalysisReport(
        n_rounds=len(dataset.rounds),
        n_sessions=len(dataset.sessions),
        run_id=dataset.manifest.get("run_id"),
    )

    def attempt(name: str, compute: Callable[[], Any]) -> Any:
        try:
            return compute()
        except (InsufficientData, StatsError) as e:
            report.skipped[name] = str(e)
            return None

    sections: List[Tuple[str, Callable[[Dataset], Any]]] = [
        ("session_length_table", session_length_analysis),
        ("bet_table", lambda d: per_round_score_analysis(d, "bet")),
        ("stop_predictor_table", stop_trigger_analysis),
        ("emotion_strategy", emotion_strategy_analysis),
        ("risk_bet_correlations", risk_bet_correlation),
        ("fairness_table", fairness_analysis),
        ("learning_curves", learning_curves),
        ("streak_table", streak_effect),
        ("session_outcomes", session_outcomes),
        ("psych_profile", psych_profile),
        ("label_distributions", label_distributions),
    ]
    for name, compute in sections:
        setattr(report, name, attempt(name, lambda: compute(dataset)))
    for name in SCORE_TABLE_FIELDS:
        table = attempt(f"score_tables.{name}", lambda: per_round_score_analysis(dataset, name))
        if table is not None:
            report.score_tables[name] = table
    return report
