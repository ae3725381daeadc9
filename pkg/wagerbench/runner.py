"""Seeded sessions, batches over the persona x machine grid, and dataset loading."""

import hashlib
import json
import threading
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from decimal import Decimal
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn

from . import __version__
from .agents import Agent, AgentError, AuthError, build_agent
from .config import AgentBackend, RunConfig, api_key_from_env
from .data_recorder import ConditionWriter, DatasetRecorder, read_jsonl
from .display import console, debug_log
from .environment import (
    MachineConfig,
    MachineKind,
    MachineState,
    apply_outcome,
    effective_win_probability,
    spin,
    to_money,
)
from .protocol import (
    BOUNDED_SCORES,
    PERSONAS,
    Decision,
    EmotionalState,
    FairnessJudgment,
    HistoryEntry,
    NormalizationFlag,
    Persona,
    PersonaName,
    RoundContext,
    StrategyMode,
)

SCHEMA_VERSION = 1


class DatasetError(ValueError):
    """Base class for unreadable or inconsistent datasets."""


class CorruptLine(DatasetError):
    """A JSONL line could not be parsed."""

    def __init__(self, path: Path, line: int, reason: str):
        self.path = Path(path)
        self.line = line
        super().__init__(f"{path}:{line}: {reason}")


class SchemaMismatch(DatasetError):
    """The dataset was written under a different schema version."""


class EmptyDataset(DatasetError):
    """The directory holds neither a manifest nor any rounds."""


class ManifestMismatch(DatasetError):
    """A resume was attempted with a configuration that differs from the manifest."""


class TerminationReason(str, Enum):
    STOPPED = "STOPPED"
    MAX_ROUNDS = "MAX_ROUNDS"
    BANKRUPT = "BANKRUPT"
    ABORTED = "ABORTED"


def condition_id(persona: PersonaName, machine_kind: MachineKind) -> str:
    return f"{PersonaName(persona).value}__{MachineKind(machine_kind).value}"


def stable_hash(*parts: Any) -> int:
    """64-bit hash of the parts that does not change between processes or platforms."""
    text = "\x1f".join(str(p) for p in parts)
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "big")


def session_streams(session_seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent machine and agent generators for one session."""
    machine_seq, agent_seq = np.random.SeedSequence(session_seed).spawn(2)
    return np.random.default_rng(machine_seq), np.random.default_rng(agent_seq)


@dataclass(frozen=True)
class RoundLog:
    """One logged round, persisted as a JSONL line."""
    run_id: str
    condition_id: str
    persona: PersonaName
    machine_kind: MachineKind
    iteration: int
    session_seed: int
    round_index: int
    balance_before: Decimal
    decision: Decision
    bet: Decimal
    won: Optional[bool]  # None on STOP rounds
    payout_delta: Decimal
    balance_after: Decimal
    hidden_effective_prob: float
    risk_score: float
    confidence: float
    fairness_score: float
    reward_expectation: float
    uncertainty: float
    emotional_state: EmotionalState
    strategy_mode: StrategyMode
    fairness_judgment: FairnessJudgment
    reasoning: str
    normalization_flags: Tuple[NormalizationFlag, ...] = ()
    raw_reply: str = ""
    latency_ms: float = 0.0
    reprompt_count: int = 0
    timestamp: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "won" and value is None:
                continue
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, Decimal):
                value = float(value)
            elif f.name == "normalization_flags":
                value = [flag.value for flag in value]
            row[f.name] = value
        return row

    @classmethod
    def from_dict(cls, row: Dict[str, Any]) -> "RoundLog":
        """Rebuild a round from its JSON form.

        Raises:
            KeyError, TypeError, ValueError: for missing or malformed fields
        """
        values = dict(row)
        money = ("balance_before", "bet", "payout_delta", "balance_after")
        for name in money:
            values[name] = to_money(values[name])
        values["persona"] = PersonaName(values["persona"])
        values["machine_kind"] = MachineKind(values["machine_kind"])
        values["decision"] = Decision(values["decision"])
        values["emotional_state"] = EmotionalState(values["emotional_state"])
        values["strategy_mode"] = StrategyMode(values["strategy_mode"])
        values["fairness_judgment"] = FairnessJudgment(values["fairness_judgment"])
        values["normalization_flags"] = tuple(
            NormalizationFlag(flag) for flag in values.get("normalization_flags", ())
        )
        values["won"] = values.get("won")
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unexpected fields {sorted(unknown)}")
        return cls(**values)


@dataclass(frozen=True)
class SessionMarker:
    """End-of-session record; a session counts as complete iff its marker exists."""
    iteration: int
    session_seed: int
    termination_reason: TerminationReason
    rounds_logged: int
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "iteration": self.iteration,
            "session_seed": self.session_seed,
            "termination_reason": self.termination_reason.value,
            "rounds_logged": self.rounds_logged,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, row: Dict[str, Any]) -> "SessionMarker":
        return cls(
            iteration=int(row["iteration"]),
            session_seed=int(row["session_seed"]),
            termination_reason=TerminationReason(row["termination_reason"]),
            rounds_logged=int(row["rounds_logged"]),
            error=row.get("error"),
        )


@dataclass(frozen=True)
class SessionSummary:
    """Per-session aggregates, always derived from the rounds."""
    persona: PersonaName
    machine_kind: MachineKind
    iteration: int
    rounds_total: int
    play_rounds: int
    wins: int
    win_rate: Optional[float]  # None when no PLAY round was logged
    net_profit: Decimal
    roi: float
    mean_bet: Optional[float]
    mean_stake_fraction: Optional[float]
    termination_reason: TerminationReason
    starting_balance: Decimal
    final_balance: Decimal

    @property
    def condition_id(self) -> str:
        return condition_id(self.persona, self.machine_kind)

    def to_dict(self) -> Dict[str, Any]:
        row = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, Decimal):
                value = float(value)
            row[f.name] = value
        return row


def summarize(
    persona: PersonaName,
    machine_kind: MachineKind,
    iteration: int,
    rounds: List[RoundLog],
    termination_reason: TerminationReason,
) -> SessionSummary:
    """Derive a session's summary from its rounds.

    ``mean_bet`` averages over every logged round, terminal STOP rounds included.
    """
    start = PERSONAS[PersonaName(persona)].starting_balance
    play = [r for r in rounds if r.decision == Decision.PLAY]
    wins = sum(1 for r in play if r.won)
    net = sum((r.payout_delta for r in rounds), Decimal("0.00"))
    final = rounds[-1].balance_after if rounds else start
    mean_bet = float(sum(r.bet for r in rounds) / len(rounds)) if rounds else None
    return SessionSummary(
        persona=PersonaName(persona),
        machine_kind=MachineKind(machine_kind),
        iteration=iteration,
        rounds_total=len(rounds),
        play_rounds=len(play),
        wins=wins,
        win_rate=wins / len(play) if play else None,
        net_profit=net,
        roi=float(net / start),
        mean_bet=mean_bet,
        mean_stake_fraction=mean_bet / float(start) if mean_bet is not None else None,
        termination_reason=TerminationReason(termination_reason),
        starting_balance=start,
        final_balance=final,
    )


@dataclass
class SessionLog:
    """Everything one session produced."""
    persona: Persona
    machine: MachineConfig
    iteration: int
    session_seed: int
    rounds: List[RoundLog] = field(default_factory=list)
    termination_reason: TerminationReason = TerminationReason.MAX_ROUNDS
    error: Optional[str] = None

    @property
    def condition_id(self) -> str:
        return condition_id(self.persona.name, self.machine.kind)

    def marker(self) -> SessionMarker:
        return SessionMarker(
            iteration=self.iteration,
            session_seed=self.session_seed,
            termination_reason=self.termination_reason,
            rounds_logged=len(self.rounds),
            error=self.error,
        )

    def summary(self) -> SessionSummary:
        return summarize(
            self.persona.name, self.machine.kind, self.iteration, self.rounds,
            self.termination_reason,
        )


def run_id_for(config: RunConfig) -> str:
    return config.config_hash()[:12]


def run_session(
    config: RunConfig,
    persona: Persona,
    machine: MachineConfig,
    iteration: int,
    agent: Optional[Agent] = None,
    run_id: Optional[str] = None,
) -> SessionLog:
    """Play one session until the agent stops, goes bankrupt or hits the round cap.

    Agent failures end the session as ABORTED; the rounds logged so far are kept.
    An agent built here is closed afterwards; one passed in is left to the caller.
    """
    if agent is None:
        agent = build_agent(config.agent, persona, config.reprompt_budget, config.prompt_version)
        try:
            return run_session(config, persona, machine, iteration, agent=agent, run_id=run_id)
        finally:
            agent.close()
    cid = condition_id(persona.name, machine.kind)
    seed = stable_hash(config.run_seed, cid, iteration)
    machine_rng, agent_rng = session_streams(seed)
    run_id = run_id or run_id_for(config)
    wall_clock = config.agent.backend == AgentBackend.REMOTE

    log = SessionLog(persona=persona, machine=machine, iteration=iteration, session_seed=seed)
    balance = persona.starting_balance
    state = MachineState(machine)
    history: List[HistoryEntry] = []

    for round_index in range(1, config.max_rounds + 1):
        context = RoundContext(persona, round_index, balance, tuple(history), config.max_rounds)
        probability = effective_win_probability(state)
        try:
            reply = agent.decide(context, agent_rng)
        except AgentError as e:
            log.termination_reason = TerminationReason.ABORTED
            log.error = str(e)
            console.log(
                f"[red]{cid} iteration {iteration} aborted in round {round_index}: {e}[/red]"
            )
            break

        record = reply.record
        common = dict(
            run_id=run_id,
            condition_id=cid,
            persona=persona.name,
            machine_kind=machine.kind,
            iteration=iteration,
            session_seed=seed,
            round_index=round_index,
            balance_before=balance,
            decision=record.decision,
            hidden_effective_prob=probability,
            risk_score=record.risk_score,
            confidence=record.confidence,
            fairness_score=record.fairness_score,
            reward_expectation=record.reward_expectation,
            uncertainty=record.uncertainty,
            emotional_state=record.emotional_state,
            strategy_mode=record.strategy_mode,
            fairness_judgment=record.fairness_judgment,
            reasoning=record.reasoning,
            normalization_flags=tuple(reply.flags),
            raw_reply=reply.raw_reply,
            latency_ms=round(reply.latency_ms, 3),
            reprompt_count=reply.reprompt_count,
            timestamp=datetime.now(timezone.utc).isoformat() if wall_clock else None,
        )

        if record.decision == Decision.STOP:
            log.rounds.append(RoundLog(
                bet=to_money(0), won=None, payout_delta=to_money(0), balance_after=balance,
                **common,
            ))
            log.termination_reason = TerminationReason.STOPPED
            break

        outcome, state = spin(state, record.bet, float(machine_rng.random()))
        new_balance = apply_outcome(balance, record.bet, outcome.won, machine.payout_multiplier)
        log.rounds.append(RoundLog(
            bet=record.bet, won=outcome.won, payout_delta=new_balance - balance,
            balance_after=new_balance, **common,
        ))
        history.append(HistoryEntry(round_index, record.bet, outcome.won, new_balance))
        balance = new_balance
        if balance <= 0:
            log.termination_reason = TerminationReason.BANKRUPT
            break

    debug_log(
        f"{cid} iteration {iteration}: {len(log.rounds)} rounds, "
        f"{log.termination_reason.value}, balance {balance}"
    )
    return log


@dataclass
class BatchResult:
    """Outcome of :func:`run_batch`; the dataset itself lives in ``output_dir``."""
    output_dir: Path
    run_id: str
    sessions_run: int = 0
    sessions_skipped: int = 0
    termination_counts: Dict[str, Counter] = field(default_factory=dict)

    @property
    def aborted(self) -> int:
        return sum(c[TerminationReason.ABORTED.value] for c in self.termination_counts.values())


def build_manifest(config: RunConfig) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "run_id": run_id_for(config),
        "config_hash": config.config_hash(),
        "seed": config.run_seed,
        "config": config.snapshot(),
        "conditions": [condition_id(p.name, m.kind) for p, m in config.conditions()],
        "generator": f"wagerbench {__version__}",
    }


def _check_resume(existing: Dict[str, Any], config: RunConfig) -> None:
    if existing.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(
            f"Dataset schema version {existing.get('schema_version')} differs from "
            f"{SCHEMA_VERSION}; use a fresh output directory"
        )
    if existing.get("config_hash") != config.config_hash():
        raise ManifestMismatch(
            "The output directory holds a run with a different configuration "
            f"(config hash {str(existing.get('config_hash'))[:12]}, this run "
            f"{config.config_hash()[:12]}); refusing to resume"
        )


def run_batch(config: RunConfig) -> BatchResult:
    """Run every session of the grid that the output directory does not already hold.

    Sessions run up to ``concurrency_limit`` at a time. Each condition file has a
    single ordered writer, so the files do not depend on scheduling.

    Raises:
        ManifestMismatch: if the output directory holds a different run
        AuthError: if the remote backend has no credential
    """
    if config.agent.backend == AgentBackend.REMOTE and not api_key_from_env(config.agent):
        raise AuthError(f"Environment variable {config.agent.api_key_env} is not set")

    recorder = DatasetRecorder(config.output_dir)
    existing = recorder.read_manifest()
    if existing is not None:
        _check_resume(existing, config)
    recorder.prepare()
    recorder.write_manifest(build_manifest(config))

    result = BatchResult(output_dir=Path(config.output_dir), run_id=run_id_for(config))
    work: List[Tuple[Persona, MachineConfig, int]] = []
    writers: Dict[str, ConditionWriter] = {}
    for persona, machine in config.conditions():
        cid = condition_id(persona.name, machine.kind)
        counts = result.termination_counts.setdefault(cid, Counter())
        done = {m["iteration"]: m for m in recorder.markers(cid)}
        recorder.prune_unmarked(cid, done)
        for marker in done.values():
            counts[marker["termination_reason"]] += 1
        pending = [i for i in range(1, config.iterations_per_condition + 1) if i not in done]
        result.sessions_skipped += config.iterations_per_condition - len(pending)
        writers[cid] = ConditionWriter(recorder, cid, pending)
        work.extend((persona, machine, i) for i in pending)

    if result.sessions_skipped:
        console.log(f"Resuming: {result.sessions_skipped} sessions already complete")
    if not work:
        console.log("[green]Nothing to do: every session is already recorded[/green]")
        return result

    gate = threading.BoundedSemaphore(config.concurrency_limit)
    run_id = result.run_id

    def play(persona: Persona, machine: MachineConfig, iteration: int) -> SessionLog:
        agent = build_agent(
            config.agent, persona, config.reprompt_budget, config.prompt_version, gate=gate
        )
        try:
            return run_session(config, persona, machine, iteration, agent=agent, run_id=run_id)
        finally:
            agent.close()

    progress = Progress(
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=console,
        transient=True,
    )
    try:
        with progress, ThreadPoolExecutor(max_workers=config.concurrency_limit) as executor:
            task = progress.add_task("Playing sessions", total=len(work))
            futures = {executor.submit(play, *item) for item in work}
            for future in as_completed(futures):
                try:
                    log = future.result()
                except BaseException:
                    for other in futures:
                        other.cancel()
                    raise
                writers[log.condition_id].submit(
                    log.iteration, [r.to_dict() for r in log.rounds], log.marker().to_dict()
                )
                result.termination_counts[log.condition_id][log.termination_reason.value] += 1
                result.sessions_run += 1
                progress.advance(task)
    finally:
        for writer in writers.values():
            writer.close()

    colour = "yellow" if result.aborted else "green"
    console.log(
        f"[{colour}]Recorded {result.sessions_run} sessions in {config.output_dir}"
        f"{f' ({result.aborted} aborted)' if result.aborted else ''}[/{colour}]"
    )
    return result


@dataclass
class Dataset:
    """A loaded dataset: rounds in canonical order plus derived session summaries."""
    root: Path
    manifest: Dict[str, Any]
    rounds: List[RoundLog]
    sessions: List[SessionSummary]
    markers: Dict[Tuple[str, int], SessionMarker] = field(default_factory=dict)

    @property
    def max_rounds(self) -> Optional[int]:
        return self.manifest.get("config", {}).get("max_rounds")

    def personas(self) -> List[PersonaName]:
        present = {s.persona for s in self.sessions}
        return [p for p in PersonaName if p in present]

    def machine_kinds(self) -> List[MachineKind]:
        present = {s.machine_kind for s in self.sessions}
        return [k for k in MachineKind if k in present]


_PERSONA_ORDER = {p: i for i, p in enumerate(PersonaName)}
_MACHINE_ORDER = {k: i for i, k in enumerate(MachineKind)}


def _session_key(persona: PersonaName, kind: MachineKind, iteration: int) -> Tuple[int, int, int]:
    return _PERSONA_ORDER[persona], _MACHINE_ORDER[kind], iteration


def _infer_termination(rounds: List[RoundLog], max_rounds: Optional[int]) -> TerminationReason:
    last = rounds[-1]
    if last.decision == Decision.STOP:
        return TerminationReason.STOPPED
    if last.balance_after <= 0:
        return TerminationReason.BANKRUPT
    if max_rounds is not None and len(rounds) >= max_rounds:
        return TerminationReason.MAX_ROUNDS
    return TerminationReason.ABORTED


def _parse_condition_file(path: Path, parse) -> List[Any]:
    items = []
    for number, text in read_jsonl(path):
        try:
            items.append(parse(json.loads(text)))
        except (ValueError, KeyError, TypeError) as e:
            raise CorruptLine(path, number, f"{type(e).__name__}: {e}") from e
    return items


def load_dataset(root: Path) -> Dataset:
    """Load a dataset directory written by :func:`run_batch`.

    Rounds come back ordered by persona, machine, iteration and round.
    Summaries are recomputed from the rounds; markers only supply the
    termination reason and sessions that logged no round.

    Raises:
        FileNotFoundError: if the directory does not exist
        EmptyDataset: if it holds no manifest and no rounds
        SchemaMismatch: if the manifest's schema version is not supported
        CorruptLine: naming the file and line of the first malformed record
    """
    recorder = DatasetRecorder(Path(root))
    if not recorder.root.is_dir():
        raise FileNotFoundError(f"Dataset directory not found: {recorder.root}")

    round_files = sorted((recorder.root / "rounds").glob("*.jsonl"))
    marker_files = sorted((recorder.root / "sessions").glob("*.jsonl"))
    try:
        manifest = recorder.read_manifest()
    except json.JSONDecodeError as e:
        raise CorruptLine(recorder.manifest_path, e.lineno, e.msg) from e
    if manifest is None:
        if not round_files and not marker_files:
            raise EmptyDataset(f"No manifest and no rounds in {recorder.root}")
        raise DatasetError(f"Manifest not found in {recorder.root}")
    if manifest.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(
            f"Dataset schema version {manifest.get('schema_version')!r} is not supported "
            f"(expected {SCHEMA_VERSION})"
        )

    grouped: Dict[Tuple[str, int], List[RoundLog]] = defaultdict(list)
    for path in round_files:
        for log in _parse_condition_file(path, RoundLog.from_dict):
            grouped[(log.condition_id, log.iteration)].append(log)

    markers: Dict[Tuple[str, int], SessionMarker] = {}
    for path in marker_files:
        for marker in _parse_condition_file(path, SessionMarker.from_dict):
            markers[(path.stem, marker.iteration)] = marker

    if not grouped and not markers:
        raise EmptyDataset(f"No rounds recorded in {recorder.root}")

    max_rounds = manifest.get("config", {}).get("max_rounds")
    keyed = []
    for key in set(grouped) | set(markers):
        cid, iteration = key
        persona_name, kind_name = cid.split("__", 1)
        persona, kind = PersonaName(persona_name), MachineKind(kind_name)
        rounds = sorted(grouped.get(key, []), key=lambda r: r.round_index)
        if key in markers:
            reason = markers[key].termination_reason
        else:
            reason = _infer_termination(rounds, max_rounds)
        keyed.append((_session_key(persona, kind, iteration), rounds,
                      summarize(persona, kind, iteration, rounds, reason)))
    keyed.sort(key=lambda item: item[0])

    return Dataset(
        root=recorder.root,
        manifest=manifest,
        rounds=[r for _, rounds, _ in keyed for r in rounds],
        sessions=[summary for _, _, summary in keyed],
        markers=markers,
    )


def check_dataset(dataset: Dataset) -> List[str]:
    """Return every violated bookkeeping invariant, as readable messages."""
    problems: List[str] = []
    by_session: Dict[Tuple[str, int], List[RoundLog]] = defaultdict(list)
    for r in dataset.rounds:
        by_session[(r.condition_id, r.iteration)].append(r)

    max_rounds = dataset.max_rounds
    for summary in dataset.sessions:
        key = (summary.condition_id, summary.iteration)
        where = f"{key[0]} iteration {key[1]}"
        rounds = by_session.get(key, [])
        indices = [r.round_index for r in rounds]
        if indices != list(range(1, len(rounds) + 1)):
            problems.append(f"{where}: round indices {indices} are not contiguous from 1")
        expected_before = summary.starting_balance
        for r in rounds:
            label = f"{where} round {r.round_index}"
            if r.balance_before != expected_before:
                problems.append(
                    f"{label}: balance_before {r.balance_before} != previous balance "
                    f"{expected_before}"
                )
            if r.balance_after != r.balance_before + r.payout_delta:
                problems.append(f"{label}: balance_after != balance_before + payout_delta")
            if r.decision == Decision.STOP:
                if r.bet != 0 or r.won is not None or r.payout_delta != 0:
                    problems.append(f"{label}: STOP round must have bet 0, no win and no payout")
                if r is not rounds[-1]:
                    problems.append(f"{label}: STOP round is not the last round of its session")
            else:
                if not 0 < r.bet <= r.balance_before:
                    problems.append(f"{label}: PLAY bet {r.bet} outside (0, {r.balance_before}]")
                if r.won is None:
                    problems.append(f"{label}: PLAY round without an outcome")
                elif not r.won and r.payout_delta != -r.bet:
                    problems.append(f"{label}: losing round must pay -bet")
                elif r.won and r.payout_delta <= 0:
                    problems.append(f"{label}: winning round must pay a positive amount")
            for name in BOUNDED_SCORES:
                value = getattr(r, name)
                if not 0 <= value <= 100:
                    problems.append(f"{label}: {name} {value} outside [0, 100]")
            expected_before = r.balance_after

        if max_rounds is not None and summary.rounds_total > max_rounds:
            problems.append(
                f"{where}: {summary.rounds_total} rounds exceed max_rounds {max_rounds}"
            )
        if summary.final_balance - summary.starting_balance != summary.net_profit:
            problems.append(f"{where}: net profit does not reconcile with the final balance")
        if summary.termination_reason == TerminationReason.BANKRUPT and summary.final_balance != 0:
            problems.append(f"{where}: BANKRUPT session ends with balance {summary.final_balance}")
        marker = dataset.markers.get(key)
        if marker is not None and marker.rounds_logged != len(rounds):
            problems.append(
                f"{where}: marker records {marker.rounds_logged} rounds, found {len(rounds)}"
            )

    if len(dataset.rounds) != sum(s.rounds_total for s in dataset.sessions):
        problems.append("Total rounds differ from the sum of session lengths")
    for persona in dataset.personas():
        persona_rounds = [r for r in dataset.rounds if r.persona == persona]
        stops = sum(1 for r in persona_rounds if r.decision == Decision.STOP)
        plays = sum(s.play_rounds for s in dataset.sessions if s.persona == persona)
        if plays != len(persona_rounds) - stops:
            problems.append(f"{persona.value}: PLAY rounds != rounds - STOP rounds")
    return problems
