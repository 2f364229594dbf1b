import sys
import time
from pathlib import Path

from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

# Add src to path relative to this script
sys.path.append(str(Path(__file__).parent.parent / "src"))

from feasregion.config import get_settings
from feasregion.contracts.diet import ObjectiveKind
from feasregion.contracts.geometry import ObservationSet
from feasregion.diet import generate_synthetic_dataset, run_case_study
from feasregion.geometry import is_valid_set

SEEDS = list(range(42, 52))
N_FOODS = 26
N_DAYS = 100
M1 = 30
MAX_SECONDS = 120.0
console = Console()


def run_seed(seed: int, kind: ObjectiveKind) -> tuple[str, str, str]:
    ds = generate_synthetic_dataset(seed=seed, n=N_FOODS, K=N_DAYS)
    known = ds.known_polyhedron()
    start = time.perf_counter()
    report = run_case_study(ds, m1=M1, objective_kind=kind)
    elapsed = time.perf_counter() - start

    problems = []
    if report.avg_l1_with > report.avg_l1_without + 1e-6:
        problems.append(f"L1 {report.avg_l1_with:.3f} > {report.avg_l1_without:.3f}")
    diets = ObservationSet(points=[report.diet_without_mio, report.diet_with_mio])
    if not is_valid_set(known, diets)[0]:
        problems.append("diet violates known bounds")
    if not report.verification.all_ok:
        problems.append("verification: " + ", ".join(i.code for i in report.verification.issues))
    if elapsed > MAX_SECONDS:
        problems.append(f"slow ({elapsed:.0f}s)")

    status = "PASS" if not problems else "FAIL"
    details = (
        f"loss {report.loss_value:.4g}; "
        f"{report.avg_l1_without:.3f} -> {report.avg_l1_with:.3f} in {elapsed:.1f}s"
    )
    if problems:
        details += "; " + "; ".join(problems)
    return f"seed {seed} {kind.value}", status, details


def main():
    console.print(
        Panel(
            "[bold blue]feasregion: DIET CASE STUDY VALIDATION[/bold blue]\n"
            f"{len(SEEDS)} synthetic seeds, {N_FOODS} foods, {N_DAYS} days, m1={M1}\n"
            f"pooled compactness above {get_settings().JOINT_MAX_BINARIES} joint binaries, "
            f"budget {MAX_SECONDS:.0f}s per run",
            border_style="blue",
        )
    )

    results = []
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
    ) as progress:
        task = progress.add_task("[cyan]Running case studies...", total=2 * len(SEEDS))
        for seed in SEEDS:
            for kind in ObjectiveKind:
                try:
                    results.append(run_seed(seed, kind))
                except Exception as e:
                    results.append((f"seed {seed} {kind.value}", "CRASH", str(e)))
                progress.update(task, advance=1)

    table = Table(title="Diet Case Study (avg L1 without -> with imputed rows)")
    table.add_column("Run")
    table.add_column("Status")
    table.add_column("Details")
    for name, status, details in results:
        color = "green" if status == "PASS" else "red"
        table.add_row(name, f"[{color}]{status}[/]", details)
    console.print(table)

    passed = sum(1 for r in results if r[1] == "PASS")
    console.print(
        Panel(
            f"[bold white]{passed} / {len(results)} runs passed[/bold white]",
            title="[bold green]DIET VALIDATION SUMMARY[/bold green]",
            border_style="green" if passed == len(results) else "red",
            expand=False,
        )
    )
    sys.exit(0 if passed == len(results) else 1)


if __name__ == "__main__":
    main()
