"""Scoring of imputed regions against golden expectations."""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from feasregion.contracts.reports import ImputedRegion
from feasregion.contracts.errors import FeasRegionError
from feasregion.geometry import region_vertices_2d

DEFAULT_TOL = 1e-6


@dataclass
class EvalResult:
    """Result of evaluating a single golden case."""

    name: str
    passed: bool
    message: str
    expected: Optional[dict[str, Any]] = None
    actual: Optional[dict[str, Any]] = None
    error: Optional[str] = None
    details: dict[str, Any] = field(default_factory=dict)


def _same_point_set(actual: list, expected: list, tol: float) -> bool:
    if len(actual) != len(expected):
        return False
    remaining = [np.asarray(e, dtype=float) for e in expected]
    for point in actual:
        point = np.asarray(point, dtype=float)
        match = next(
            (i for i, e in enumerate(remaining) if np.max(np.abs(point - e)) <= tol), None
        )
        if match is None:
            return False
        remaining.pop(match)
    return True


def score_region(
    case_name: str,
    region: ImputedRegion,
    expected: dict[str, Any],
) -> EvalResult:
    """Compare an imputed region with the expectations of one case.

    Recognised keys: ``loss_value``, ``rows`` (``[a..., b]`` per row, in
    order), ``vertices`` (as a set), ``forward_optimum``, ``verification``
    and ``tol``.
    """
    tol = float(expected.get("tol", DEFAULT_TOL))
    checks_passed = []
    checks_failed = []

    if "loss_value" in expected:
        target = float(expected["loss_value"])
        if abs(region.loss_value - target) <= tol * max(1.0, abs(target)):
            checks_passed.append(f"loss {region.loss_value:.9g} = {target:g}")
        else:
            checks_failed.append(f"loss {region.loss_value:.9g} != {target:g}")

    if "rows" in expected:
        actual_rows = [list(r.a) + [r.b] for r in region.imputed_rows]
        expected_rows = expected["rows"]
        if len(actual_rows) == len(expected_rows) and np.allclose(
            actual_rows, expected_rows, atol=tol, rtol=0.0
        ):
            checks_passed.append(f"{len(actual_rows)} rows match")
        else:
            checks_failed.append(f"rows {actual_rows} != {expected_rows}")

    if "vertices" in expected:
        try:
            vertices = region_vertices_2d(region.region())
        except FeasRegionError as e:
            checks_failed.append(f"vertices unavailable: {e}")
        else:
            if _same_point_set(vertices, expected["vertices"], tol):
                checks_passed.append(f"{len(vertices)} vertices match")
            else:
                checks_failed.append(f"vertices {vertices} != {expected['vertices']}")

    if "forward_optimum" in expected:
        target = float(expected["forward_optimum"])
        actual = region.verification.forward_optimum
        if actual is not None and abs(actual - target) <= tol * max(1.0, abs(target)):
            checks_passed.append(f"forward optimum {actual:.9g}")
        else:
            checks_failed.append(f"forward optimum {actual} != {target:g}")

    if "verification" in expected:
        want = bool(expected["verification"])
        if region.verification.all_ok == want:
            checks_passed.append(f"verification {want}")
        else:
            issues = [i.code for i in region.verification.issues]
            checks_failed.append(f"verification {region.verification.all_ok}, issues {issues}")

    passed = not checks_failed and bool(checks_passed)
    message = (
        f"All {len(checks_passed)} checks passed"
        if passed
        else f"Failed: {'; '.join(checks_failed) or 'no checks configured'}"
    )
    return EvalResult(
        name=case_name,
        passed=passed,
        message=message,
        expected=expected,
        actual={
            "loss_value": region.loss_value,
            "forward_optimum": region.verification.forward_optimum,
            "verification": region.verification.all_ok,
        },
        details={"checks_passed": checks_passed, "checks_failed": checks_failed},
    )
