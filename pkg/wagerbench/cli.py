"""Command-line interface for Wagerbench."""

import json
from decimal import Decimal
from pathlib import Path
from typing import List, Optional

import click
import typer

from . import __version__
from .agents import AgentError
from .config import AgentBackend, ConfigError, parse_config
from .display import console, set_debug, set_quiet, show_analysis, show_batch_summary, show_sbi
from .environment import MachineConfig, MachineKind, apply_outcome, to_money
from .metrics import InsufficientData, analyze as run_analysis, sbi as run_sbi
from .metrics.sbi import STABILITY_METHODS
from .protocol import (
    DEFAULT_MAX_ROUNDS,
    PROMPT_VERSION,
    HistoryEntry,
    RoundContext,
    build_round_context,
    get_persona,
)
from .report import emit_report, finite_or_none, resolve_formats
from .runner import DatasetError, check_dataset, load_dataset, run_batch
from .stats import StatsError

app = typer.Typer(
    help="Wagerbench - A persona-conditioned gambling benchmark for language models",
    add_completion=False,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_AGENT = 3

_CONFIG_OPTION = typer.Option(..., "--config", "-c", help="Path to the run configuration (YAML)")
_DATA_OPTION = typer.Option(..., "--data", "-d", help="Dataset directory written by run/simulate")


def version_callback(value: bool):
    if value:
        console.print(f"wagerbench {__version__}")
        raise typer.Exit()


@app.callback()
def callback(
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        "-v",
        help="Show version information.",
        callback=version_callback,
        is_eager=True,
    ),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Suppress console output"),
    debug: bool = typer.Option(False, "--debug", help="Show per-request and per-session detail"),
):
    """Wagerbench - Measure how persona framing shifts an agent's gambling behavior."""
    set_quiet(quiet)
    set_debug(debug)


def _execute(
    config_path: Path, backend: AgentBackend, out: Optional[Path], seed: Optional[int]
) -> None:
    config = parse_config(config_path, backend=backend, seed=seed, output_dir=out)
    console.log(
        f"🎰 {len(config.personas)} personas x {len(config.machines)} machines x "
        f"{config.iterations_per_condition} iterations ({backend.value} agent, "
        f"seed {config.run_seed})"
    )
    result = run_batch(config)
    show_batch_summary(result)
    if result.aborted:
        console.print(f"[red]{result.aborted} sessions aborted on agent failure[/red]")
        raise typer.Exit(EXIT_AGENT)


@app.command()
def run(
    config_path: Path = _CONFIG_OPTION,
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Override the output directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the run seed"),
):
    """Run the benchmark against the remote agent endpoint."""
    _execute(config_path, AgentBackend.REMOTE, out, seed)


@app.command()
def simulate(
    config_path: Path = _CONFIG_OPTION,
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Override the output directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the run seed"),
):
    """Run the benchmark with scripted simulant agents (no network)."""
    _execute(config_path, AgentBackend.SIMULANT, out, seed)


@app.command()
def analyze(
    data: Path = _DATA_OPTION,
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write report files here"),
    fmt: str = typer.Option("all", "--format", "-f", help="json, csv, md or all"),
):
    """Run the analysis battery on a dataset."""
    formats = resolve_formats(fmt)
    report = run_analysis(load_dataset(data))
    show_analysis(report)
    if out is not None:
        emit_report(report, None, out, formats)


@app.command()
def sbi(
    data: Path = _DATA_OPTION,
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write sbi.json here"),
    stability: str = typer.Option(
        "ratio", "--stability", help=f"Persona stability transform: {', '.join(STABILITY_METHODS)}"
    ),
):
    """Compute the Socioeconomic Behavioral Index for a dataset."""
    report = run_sbi(load_dataset(data), stability_method=stability)
    show_sbi(report)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        path = out / "sbi.json"
        with open(path, "w", encoding="utf-8") as f:
            json.dump(finite_or_none(report.to_dict()), f, indent=2, allow_nan=False)
            f.write("\n")
        console.log(f"[green]Wrote {path}[/green]")


@app.command()
def report(
    data: Path = _DATA_OPTION,
    out: Optional[Path] = typer.Option(
        None, "--out", "-o", help="Report directory (default: <data>/report)"
    ),
    fmt: str = typer.Option("all", "--format", "-f", help="json, csv, md or all"),
    stability: str = typer.Option("ratio", "--stability", help="Persona stability transform"),
):
    """Analyze a dataset and write the full report bundle."""
    formats = resolve_formats(fmt)
    dataset = load_dataset(data)
    analysis = run_analysis(dataset)
    index = run_sbi(dataset, stability_method=stability)
    emit_report(analysis, index, out if out is not None else data / "report", formats)


@app.command()
def validate(data: Path = _DATA_OPTION):
    """Check a dataset's schema and bookkeeping invariants."""
    dataset = load_dataset(data)
    problems = check_dataset(dataset)
    if problems:
        for problem in problems:
            console.print(f"[red]✗ {problem}[/red]")
        console.print(f"[red]{len(problems)} problems in {data}[/red]")
        raise typer.Exit(EXIT_DATA)
    console.print(
        f"[green]✓ {len(dataset.sessions)} sessions, {len(dataset.rounds)} rounds: "
        f"all invariants hold[/green]"
    )


def _history(
    outcomes: str, start: Decimal, bet: Decimal, multiplier: float
) -> List[HistoryEntry]:
    history = []
    balance = start
    for index, mark in enumerate(outcomes.upper(), start=1):
        if mark not in "WL":
            raise typer.BadParameter(f"Outcome {mark!r} must be W or L", param_hint="--outcomes")
        stake = min(bet, balance)
        if stake <= 0:
            raise typer.BadParameter("History runs out of money", param_hint="--outcomes")
        balance = apply_outcome(balance, stake, mark == "W", multiplier)
        history.append(HistoryEntry(index, stake, mark == "W", balance))
    return history


@app.command()
def prompt(
    persona: str = typer.Option(..., "--persona", "-p", help="rich, middle or poor"),
    round_index: int = typer.Option(1, "--round", "-r", help="Round number (1-based)"),
    balance: Optional[float] = typer.Option(
        None, "--balance", "-b", help="Balance before the shown history (default: starting balance)"
    ),
    outcomes: Optional[str] = typer.Option(
        None, "--outcomes", help="Earlier outcomes as W/L letters (default: all losses)"
    ),
    bet: float = typer.Option(10.0, "--bet", help="Stake of each earlier round"),
    max_rounds: int = typer.Option(DEFAULT_MAX_ROUNDS, "--max-rounds"),
    prompt_version: str = typer.Option(PROMPT_VERSION, "--prompt-version"),
):
    """Print the exact messages an agent receives for one round."""
    try:
        profile = get_persona(persona)
    except ValueError as e:
        raise typer.BadParameter(str(e), param_hint="--persona") from e
    if round_index < 1:
        raise typer.BadParameter("Rounds are numbered from 1", param_hint="--round")
    if outcomes is None:
        outcomes = "L" * (round_index - 1)
    elif len(outcomes) != round_index - 1:
        raise typer.BadParameter(
            f"Round {round_index} needs {round_index - 1} earlier outcomes", param_hint="--outcomes"
        )
    start = profile.starting_balance if balance is None else to_money(balance)
    multiplier = MachineConfig.for_kind(MachineKind.FAIR).payout_multiplier
    history = _history(outcomes, start, to_money(bet), multiplier)
    context = RoundContext(
        persona=profile,
        round_index=round_index,
        current_balance=history[-1].balance_after if history else start,
        history=tuple(history),
        max_rounds=max_rounds,
    )
    for message in build_round_context(context, prompt_version):
        console.rule(message["role"])
        console.print(message["content"], markup=False, highlight=False)


def main() -> int:
    """Console-script entry point; returns the process exit code."""
    try:
        code = app(standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        console.print("[yellow]Aborted[/yellow]")
        return EXIT_USAGE
    except AgentError as e:
        console.print(f"[red]Agent failure: {e}[/red]")
        return EXIT_AGENT
    except (ConfigError, DatasetError, StatsError, InsufficientData) as e:
        console.print(f"[red]Error: {e}[/red]")
        return EXIT_DATA
    except (OSError, ValueError) as e:
        console.print(f"[red]Error: {e}[/red]")
        return EXIT_DATA
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
