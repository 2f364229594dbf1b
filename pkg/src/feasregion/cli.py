"""CLI for feasregion.

Exit codes: 0 success, 1 bad input, 2 solver failure, 3 verification failed.
"""

import contextlib
import json
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from feasregion.config import settings
from feasregion.contracts.diet import ObjectiveKind
from feasregion.contracts.errors import (
    AssumptionViolationError,
    BigMTooSmallError,
    DatasetError,
    DimensionMismatchError,
    EmptyRegionError,
    FeasRegionError,
    InfeasibleImputationError,
    InternalInconsistencyError,
    NormalizationDegenerateError,
    SchemaError,
    SizeGuardError,
    SolverLimitError,
    UnboundedRegionError,
    ZeroCostVectorError,
)
from feasregion.contracts.files import ProblemFile, RegionFile
from feasregion.contracts.problem import (
    AdjacencyLoss,
    CombinedLoss,
    CompactnessLoss,
    FairnessLoss,
    IndifferenceLoss,
    LossSpec,
)
from feasregion.contracts.reports import VerificationReport
from feasregion.util.logging import init_default_logging

app = typer.Typer(
    name="feasregion",
    help="Infer unknown linear constraints from observed feasible solutions",
)
console = Console()

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOLVER = 2
EXIT_VERIFICATION = 3

INPUT_ERRORS = (
    DimensionMismatchError,
    ZeroCostVectorError,
    NormalizationDegenerateError,
    AssumptionViolationError,
    DatasetError,
    SchemaError,
)
SOLVER_ERRORS = (
    SolverLimitError,
    SizeGuardError,
    BigMTooSmallError,
    InfeasibleImputationError,
    InternalInconsistencyError,
    EmptyRegionError,
    UnboundedRegionError,
)

LogLevel = typer.Option(settings.LOG_LEVEL, "--log-level", help="Logging level")


@contextlib.contextmanager
def _exit_on_errors():
    """Translate library errors into exit codes."""
    try:
        yield
    except ValidationError as e:
        console.print(f"[red]Invalid input:[/red] {e.error_count()} error(s)")
        for error in e.errors():
            location = ".".join(str(p) for p in error["loc"]) or "<document>"
            console.print(f"  - {location}: {error['msg']}")
        raise typer.Exit(EXIT_INPUT)
    except json.JSONDecodeError as e:
        console.print(f"[red]Malformed JSON at line {e.lineno}, column {e.colno}:[/red] {e.msg}")
        raise typer.Exit(EXIT_INPUT)
    except (FileNotFoundError, IsADirectoryError) as e:
        console.print(f"[red]Cannot read input:[/red] {e}")
        raise typer.Exit(EXIT_INPUT)
    except INPUT_ERRORS as e:
        console.print(f"[red]Input error ({e.detail.code}):[/red] {e}")
        for key, value in e.context.items():
            console.print(f"  {key}: {value}")
        raise typer.Exit(EXIT_INPUT)
    except SOLVER_ERRORS as e:
        console.print(f"[red]Solver error ({e.detail.code}):[/red] {e}")
        if isinstance(e, BigMTooSmallError):
            console.print(f"  suggested big_m: {e.suggested_big_m:g}")
        elif isinstance(e, SizeGuardError):
            console.print("  use the l1 adherence distance for larger instances")
        for key, value in e.context.items():
            console.print(f"  {key}: {value}")
        raise typer.Exit(EXIT_SOLVER)
    except FeasRegionError as e:
        console.print(f"[red]Error ({e.detail.code}):[/red] {e}")
        raise typer.Exit(EXIT_INPUT)


def _loss_from_options(
    file_loss: LossSpec, primary: Optional[str], secondary: Optional[str]
) -> LossSpec:
    """Loss named on the command line; parameters come from the file when kinds agree."""
    simple = {
        "indifference": IndifferenceLoss,
        "adjacency": AdjacencyLoss,
        "fairness": FairnessLoss,
        "compactness": CompactnessLoss,
    }

    def resolve(name: str):
        if name == file_loss.kind:
            return file_loss
        if name not in simple:
            raise SchemaError(f"loss {name!r} needs parameters; give it in the problem file")
        return simple[name]()

    if primary is None:
        if secondary is not None:
            raise SchemaError("--secondary requires --loss")
        return file_loss
    first = resolve(primary)
    if secondary is None:
        return first
    return CombinedLoss(losses=[first, resolve(secondary)])


def _print_verification(report: VerificationReport) -> None:
    table = Table(title="Verification")
    table.add_column("Check")
    table.add_column("Status")
    table.add_column("Details")

    def mark(ok: bool) -> str:
        return "[green]✓[/green]" if ok else "[red]✗[/red]"

    table.add_row("Observations feasible", mark(report.primal_feasible),
                  f"worst violation {report.worst_violation:.3g}")
    table.add_row("x0 optimal", mark(report.x0_optimal),
                  f"forward optimum {report.forward_optimum}")
    table.add_row("Rows normalized", mark(report.normalization_ok), "")
    console.print(table)
    for violation in report.violations[:10]:
        console.print(
            f"  row {violation.row} cuts observation {violation.observation} "
            f"by {violation.amount:.6g}"
        )
    for issue in report.issues:
        console.print(f"  [yellow]{issue.code}[/yellow]: {issue.message}")


@app.command()
def infer(
    problem: Path = typer.Option(..., "--problem", "-p", help="Problem JSON file"),
    loss: Optional[str] = typer.Option(None, "--loss", help="Loss (overrides the file)"),
    secondary: Optional[str] = typer.Option(None, "--secondary", help="Second combined stage"),
    m1: Optional[int] = typer.Option(None, "--m1", min=1, help="Number of rows to impute"),
    out: Path = typer.Option(Path("region.json"), "--out", "-o", help="Region JSON output"),
    plot: Optional[Path] = typer.Option(None, "--plot", help="SVG output (n = 2 only)"),
    log_level: str = LogLevel,
):
    """Impute unknown rows for a problem file and write the region."""
    init_default_logging(log_level)

    from feasregion.imputation import impute
    from feasregion.render import write_svg

    with _exit_on_errors():
        spec = ProblemFile.load(problem)
        if m1 is not None:
            spec = spec.model_copy(update={"m1": m1})
        instance = spec.to_instance()
        chosen = _loss_from_options(spec.loss, loss, secondary)
        console.print(
            Panel.fit(
                f"[bold blue]Imputing {instance.m1} rows[/bold blue]\n"
                f"loss: {chosen.kind}  n = {instance.n}  K = {instance.observations.K}",
                border_style="blue",
            )
        )
        region = impute(instance, chosen)
        RegionFile.from_region(region).dump(out)
        if plot is not None:
            if instance.n == 2:
                write_svg(plot, region, instance.observations)
                console.print(f"Plot: {plot}")
            else:
                console.print("[yellow]--plot ignored: plots need n = 2[/yellow]")

    console.print(f"Loss value: {region.loss_value:.9g}")
    if region.stage_values:
        console.print(f"Stage values: {', '.join(f'{v:.9g}' for v in region.stage_values)}")
    console.print(f"Region: {out}")
    _print_verification(region.verification)
    if not region.verification.all_ok:
        raise typer.Exit(EXIT_VERIFICATION)


@app.command()
def verify(
    region: Path = typer.Option(..., "--region", "-r", help="Region JSON file"),
    problem: Path = typer.Option(..., "--problem", "-p", help="Problem JSON file"),
    log_level: str = LogLevel,
):
    """Check that every observation is feasible and x0 optimal for a region."""
    init_default_logging(log_level)

    from feasregion.forward import verify_imputation

    with _exit_on_errors():
        spec = ProblemFile.load(problem)
        stored = RegionFile.load(region).to_region()
        instance = spec.to_instance()
        if stored.n != instance.n:
            raise DimensionMismatchError(
                f"region has dimension {stored.n}, problem has {instance.n}"
            )
        report = verify_imputation(stored.region(), instance.observations, instance.c)

    _print_verification(report)
    if not report.all_ok:
        raise typer.Exit(EXIT_VERIFICATION)


@app.command()
def forward(
    problem: Path = typer.Option(..., "--problem", "-p", help="Problem JSON file (cost vector)"),
    region: Path = typer.Option(..., "--region", "-r", help="Region JSON file"),
    log_level: str = LogLevel,
):
    """Solve the forward LP over a stored region."""
    init_default_logging(log_level)

    from feasregion.contracts.problem import ForwardProblem
    from feasregion.contracts.solver import SolveStatus
    from feasregion.forward import solve_forward

    with _exit_on_errors():
        spec = ProblemFile.load(problem)
        stored = RegionFile.load(region).to_region()
        result = solve_forward(ForwardProblem(c=spec.c, region=stored.region()))

    console.print(f"Status: {result.status.value}")
    if result.status == SolveStatus.iteration_limit:
        raise typer.Exit(EXIT_SOLVER)
    if result.is_optimal:
        console.print(f"Optimal value: {result.objective_value:.9g}")
        console.print(f"Optimal point: [{', '.join(f'{v:.9g}' for v in result.solution)}]")


@app.command()
def diet(
    observations: Path = typer.Option(..., "--observations", help="Observations CSV"),
    nutrients: Path = typer.Option(..., "--nutrients", help="Nutrients CSV"),
    bounds: Path = typer.Option(..., "--bounds", help="Bounds JSON"),
    objective: ObjectiveKind = typer.Option(ObjectiveKind.min_sodium, "--objective"),
    m1: int = typer.Option(30, "--m1", min=1, help="Number of rows to impute"),
    out: Path = typer.Option(Path("diet_report.json"), "--out", "-o", help="Report JSON"),
    csv: Optional[Path] = typer.Option(None, "--csv", help="Per-food comparison CSV"),
    auto_relax: bool = typer.Option(False, "--auto-relax", help="Widen violated bounds"),
    log_level: str = LogLevel,
):
    """Run the diet case study on a dataset."""
    init_default_logging(log_level)

    from feasregion.diet import export_comparison_csv, load_dataset, run_case_study

    with _exit_on_errors():
        ds = load_dataset(
            observations, nutrients, bounds, objective_kind=objective, auto_relax=auto_relax
        )
        console.print(
            Panel.fit(
                f"[bold blue]Diet case study[/bold blue]\n"
                f"{ds.n} foods, {ds.K} days, {objective.value}, m1 = {m1}",
                border_style="blue",
            )
        )
        report = run_case_study(ds, m1=m1, objective_kind=objective)
        Path(out).write_text(report.model_dump_json(indent=2))
        if csv is not None:
            export_comparison_csv(report, csv)

    table = Table(title="Average L1 distance to observations")
    table.add_column("Diet")
    table.add_column("Avg L1", justify="right")
    table.add_row("Known constraints only", f"{report.avg_l1_without:.4f}")
    table.add_row("With imputed constraints", f"{report.avg_l1_with:.4f}")
    console.print(table)
    console.print(f"Report: {out}")
    _print_verification(report.verification)
    if not report.verification.all_ok:
        raise typer.Exit(EXIT_VERIFICATION)


@app.command()
def synth(
    seed: int = typer.Option(42, "--seed", help="Random seed"),
    n: int = typer.Option(26, "--n", min=2, help="Number of foods"),
    k: int = typer.Option(100, "--k", min=2, help="Number of days"),
    sparsity: Optional[float] = typer.Option(None, "--sparsity", help="Mean share of days skipped"),
    out_dir: Path = typer.Option(Path("data/synthetic"), "--out-dir", help="Output directory"),
    log_level: str = LogLevel,
):
    """Write a synthetic diet dataset."""
    init_default_logging(log_level)

    from feasregion.diet import generate_synthetic_dataset, summarize_consumption

    try:
        ds = generate_synthetic_dataset(seed=seed, n=n, K=k, sparsity=sparsity, out_dir=out_dir)
    except ValueError as e:
        console.print(f"[red]Invalid arguments:[/red] {e}")
        raise typer.Exit(EXIT_INPUT)

    summary = summarize_consumption(ds)
    table = Table(title=f"Synthetic dataset (seed {seed})")
    table.add_column("Food")
    table.add_column("Days", justify="right")
    table.add_column("Mean", justify="right")
    table.add_column("Std", justify="right")
    for row in summary.itertuples(index=False):
        table.add_row(
            row.food, str(row.days_consumed), f"{row.mean_servings:.2f}", f"{row.std_servings:.2f}"
        )
    console.print(table)
    console.print(f"Written to {out_dir} (hash {ds.dataset_hash[:12]})")


@app.command("eval")
def eval_cases(
    cases: Path = typer.Option(Path("data/cases/eval_cases.yaml"), "--cases", "-c",
                               help="Path to eval_cases.yaml"),
    log_level: str = LogLevel,
):
    """Run golden cases and report pass/fail."""
    init_default_logging(log_level)

    from feasregion.eval import EvalHarness

    console.print(Panel.fit("[bold blue]feasregion - Evaluation[/bold blue]", border_style="blue"))
    if not cases.exists():
        console.print(f"[red]Cases file not found: {cases}[/red]")
        raise typer.Exit(EXIT_INPUT)

    harness = EvalHarness()
    results = harness.run_all(cases)
    table = Table(title="Golden cases")
    table.add_column("Case")
    table.add_column("Result")
    table.add_column("Message")
    for result in results:
        status = "[green]PASS[/green]" if result.passed else "[red]FAIL[/red]"
        table.add_row(result.name, status, result.message)
    console.print(table)

    summary = harness.summary(results)
    console.print(f"{summary['passed']}/{summary['total']} passed")
    if summary["failed"]:
        raise typer.Exit(EXIT_INPUT)


if __name__ == "__main__":
    app()
