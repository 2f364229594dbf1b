import sys
import time
from pathlib import Path

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

# Add src to path relative to this script
sys.path.append(str(Path(__file__).parent.parent / "src"))

from feasregion.eval import EvalHarness

CASES_PATH = Path(__file__).parent.parent / "data/cases/eval_cases.yaml"
console = Console()


def main():
    console.print(
        Panel(
            "[bold blue]feasregion: GOLDEN CASE VALIDATION[/bold blue]\n"
            f"Cases from {CASES_PATH.name}, timed one by one",
            border_style="blue",
        )
    )

    harness = EvalHarness()
    cases = harness.load_cases(CASES_PATH)

    table = Table(title="Golden Cases")
    table.add_column("Case")
    table.add_column("Status")
    table.add_column("Seconds", justify="right")
    table.add_column("Message")

    results = []
    for case in cases:
        start = time.perf_counter()
        result = harness.run_case(case)
        elapsed = time.perf_counter() - start
        results.append(result)
        color = "green" if result.passed else "red"
        status = "PASS" if result.passed else "FAIL"
        table.add_row(result.name, f"[{color}]{status}[/]", f"{elapsed:.2f}", result.message)
    console.print(table)

    summary = harness.summary(results)
    console.print(
        Panel(
            f"[bold white]{summary['passed']} / {summary['total']} cases passed[/bold white]",
            title="[bold green]CASE VALIDATION SUMMARY[/bold green]",
            border_style="green" if summary["failed"] == 0 else "red",
            expand=False,
        )
    )
    sys.exit(0 if summary["failed"] == 0 else 1)


if __name__ == "__main__":
    main()
