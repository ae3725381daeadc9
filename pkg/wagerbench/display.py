"""Console output shared by every module."""

from typing import TYPE_CHECKING, Optional

from rich.console import Console
from rich.table import Table

if TYPE_CHECKING:
    from .metrics import AnalysisReport, SbiReport
    from .runner import BatchResult

console = Console()

_debug_mode = False


def set_quiet(quiet: bool) -> None:
    """Silence (or restore) all console output."""
    console.quiet = quiet


def set_debug(enabled: bool) -> None:
    global _debug_mode
    _debug_mode = enabled


def is_debug() -> bool:
    return _debug_mode


def debug_log(message: str) -> None:
    """Log a dim diagnostic line when debug output is enabled."""
    if _debug_mode:
        console.log(f"[dim]{message}[/dim]")


def _fmt(value: Optional[float], digits: int = 2) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def show_batch_summary(result: "BatchResult") -> None:
    """Print termination counts per condition after a batch."""
    table = Table(title=f"Run {result.run_id}", show_header=True, header_style="bold blue")
    table.add_column("Condition", style="cyan")
    reasons = ("STOPPED", "MAX_ROUNDS", "BANKRUPT", "ABORTED")
    for reason in reasons:
        table.add_column(reason, justify="right")
    for cid, counts in result.termination_counts.items():
        table.add_row(cid, *(str(counts.get(reason, 0)) for reason in reasons))
    console.print(table)
    console.print(
        f"Sessions run: {result.sessions_run}, resumed past: {result.sessions_skipped}, "
        f"output: {result.output_dir}"
    )


def show_analysis(report: "AnalysisReport") -> None:
    """Print the headline tables of an analysis run."""
    console.print(f"[bold]{report.n_sessions} sessions, {report.n_rounds} rounds[/bold]")

    lengths = report.session_length_table
    if lengths is not None:
        table = Table(title="Session length", show_header=True, header_style="bold blue")
        for column in ("Persona", "n", "Mean", "Median", "SD"):
            table.add_column(column, style="cyan" if column == "Persona" else None)
        for persona, d in lengths.by_persona.items():
            table.add_row(persona, str(d.n), _fmt(d.mean), _fmt(d.median), _fmt(d.sd))
        console.print(table)

    if report.psych_profile:
        fields = list(next(iter(report.psych_profile.values())).keys())
        table = Table(title="Mean scores", show_header=True, header_style="bold blue")
        table.add_column("Persona", style="cyan")
        for name in fields:
            table.add_column(name, justify="right")
        for persona, means in report.psych_profile.items():
            table.add_row(persona, *(_fmt(means[name]) for name in fields))
        console.print(table)

    if report.stop_predictor_table:
        table = Table(title="Stop predictors", show_header=True, header_style="bold blue")
        table.add_column("Field", style="cyan")
        for column in ("PLAY mean", "STOP mean", "Point-biserial"):
            table.add_column(column, justify="right")
        for p in report.stop_predictor_table:
            table.add_row(
                p.field, _fmt(p.play_mean), _fmt(p.stop_mean),
                _fmt(p.point_biserial.effect_size, 3),
            )
        console.print(table)

    fairness = report.fairness_table
    if fairness is not None:
        table = Table(title="Fairness by machine", show_header=True, header_style="bold blue")
        for column in ("Machine", "n", "Mean", "SD"):
            table.add_column(column, style="cyan" if column == "Machine" else None)
        for kind, d in fairness.by_machine.items():
            table.add_row(kind, str(d.n), _fmt(d.mean), _fmt(d.sd))
        console.print(table)

    for name, reason in report.skipped.items():
        console.print(f"[yellow]Skipped {name}: {reason}[/yellow]")


def show_sbi(report: "SbiReport") -> None:
    table = Table(
        title="Socioeconomic Behavioral Index", show_header=True, header_style="bold blue"
    )
    table.add_column("Component", style="cyan")
    table.add_column("Value", justify="right", style="green")
    for name, value in report.components().items():
        table.add_row(name, _fmt(value, 3))
    table.add_row("aggregate", _fmt(report.aggregate, 3), style="bold")
    console.print(table)
    for name, reason in report.missing.items():
        console.print(f"[yellow]{name} not computed: {reason}[/yellow]")
