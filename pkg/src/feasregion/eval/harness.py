"""Evaluation harness for running golden cases."""

from pathlib import Path
from typing import Any, Optional

import yaml
from pydantic import TypeAdapter

from feasregion.contracts.errors import FeasRegionError
from feasregion.contracts.files import ProblemFile
from feasregion.contracts.problem import LossSpec
from feasregion.eval.scoring import EvalResult, score_region
from feasregion.imputation import impute
from feasregion.util.logging import get_logger

logger = get_logger("eval")

_LOSS = TypeAdapter(LossSpec)


class EvalHarness:
    """Runs golden cases from YAML.

    Each case names a problem file (relative to the YAML file), an optional
    loss and ``m1`` overriding the file, and the expectations scored by
    :func:`score_region`. ``expected.error`` names an error code the case
    must raise instead.
    """

    def __init__(self, base_dir: Optional[Path] = None):
        self.base_dir = base_dir

    def load_cases(self, cases_path: Path) -> list[dict[str, Any]]:
        """Load cases from a YAML file of one or more documents."""
        cases_path = Path(cases_path)
        if self.base_dir is None:
            self.base_dir = cases_path.parent

        cases = []
        for doc in yaml.safe_load_all(cases_path.read_text()):
            if doc and isinstance(doc, list):
                cases.extend(doc)
            elif doc:
                cases.append(doc)
        return [c for c in cases if c]

    def run_case(self, case: dict[str, Any]) -> EvalResult:
        case_name = case.get("name", "unnamed")
        expected = case.get("expected", {})
        try:
            problem = ProblemFile.load(Path(self.base_dir or ".") / case["problem"])
            updates = {}
            if "loss" in case:
                updates["loss"] = _LOSS.validate_python(case["loss"])
            if "m1" in case:
                updates["m1"] = int(case["m1"])
            problem = problem.model_copy(update=updates)
            region = impute(problem.to_instance(), problem.loss)
        except FeasRegionError as e:
            if expected.get("error") == e.detail.code:
                return EvalResult(name=case_name, passed=True,
                                  message=f"Raised {e.detail.code} as expected")
            return EvalResult(name=case_name, passed=False,
                              message=f"Error: {e}", error=e.detail.code)
        except Exception as e:
            return EvalResult(name=case_name, passed=False, message=f"Error: {e}", error=str(e))

        if "error" in expected:
            return EvalResult(name=case_name, passed=False,
                              message=f"Expected error {expected['error']} but imputation succeeded")
        result = score_region(case_name, region, expected)
        logger.debug("%s: %s", case_name, result.message)
        return result

    def run_all(self, cases_path: Path) -> list[EvalResult]:
        return [self.run_case(case) for case in self.load_cases(cases_path)]

    def summary(self, results: list[EvalResult]) -> dict[str, Any]:
        passed = sum(1 for r in results if r.passed)
        return {
            "total": len(results),
            "passed": passed,
            "failed": len(results) - passed,
            "pass_rate": passed / len(results) if results else 0,
            "failures": [{"name": r.name, "message": r.message} for r in results if not r.passed],
        }
