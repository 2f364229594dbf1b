"""Forward LP solves, verification of imputed regions and dual reconstruction."""

from collections.abc import Sequence
from typing import Optional

import numpy as np

from feasregion.config import get_settings
from feasregion.contracts.geometry import ObservationSet, Polyhedron
from feasregion.contracts.messages import err
from feasregion.contracts.problem import ForwardProblem
from feasregion.contracts.reports import ImputedRegion, VerificationReport
from feasregion.contracts.solver import Relation, SolverResult, SolveStatus
from feasregion.engine import ModelBuilder, dot, solve_lp
from feasregion.geometry import is_valid_set, row_is_normalized
from feasregion.util.logging import get_logger

logger = get_logger("forward")


def solve_forward(fp: ForwardProblem) -> SolverResult:
    """Solve ``min c'x`` over the region; statuses are passed through."""
    builder = ModelBuilder("forward")
    x = builder.add_vars("x", fp.region.n)
    for i, row in enumerate(fp.region.rows):
        builder.add_constraint(dot(row.a, x), Relation.ge, row.b, name=f"row[{i}]")
    builder.set_objective(dot(fp.c, x))
    return solve_lp(builder.build())


def verify_imputation(
    region: Polyhedron, obs: ObservationSet, c: Sequence[float]
) -> VerificationReport:
    """Check feasibility of every observation and optimality of x^0.

    Failures are recorded in the report, never raised.
    """
    settings = get_settings()
    c = np.asarray(c, dtype=float)
    issues = []

    primal_feasible, violations = is_valid_set(region, obs)
    worst = max((v.amount for v in violations), default=0.0)
    if not primal_feasible:
        issues.append(
            err(
                "observation_infeasible",
                f"{len(violations)} observation/row pairs violate the region",
                worst_violation=worst,
            )
        )

    normalization_ok = all(row_is_normalized(row, row.normalization) for row in region.rows)
    if not normalization_ok:
        issues.append(err("row_not_normalized", "a row does not satisfy its normalization tag"))

    x0_value = float(c @ obs.x0)
    tol = settings.OPTIMALITY_TOL
    values = obs.matrix @ c
    co_optimal = [int(k) for k in np.flatnonzero(np.abs(values - x0_value) <= tol)]

    result = solve_forward(ForwardProblem(c=c.tolist(), region=region))
    forward_optimum = result.objective_value if result.is_optimal else None
    x0_optimal = False
    if result.is_optimal:
        x0_optimal = primal_feasible and abs(forward_optimum - x0_value) <= tol
        if not x0_optimal:
            issues.append(
                err(
                    "x0_not_optimal",
                    "forward optimum differs from c'x0",
                    forward_optimum=forward_optimum,
                    x0_value=x0_value,
                )
            )
    else:
        issues.append(
            err("forward_not_optimal", f"forward problem is {result.status.value}")
        )

    report = VerificationReport(
        primal_feasible=primal_feasible,
        worst_violation=worst,
        x0_optimal=x0_optimal,
        normalization_ok=normalization_ok,
        forward_optimum=forward_optimum,
        co_optimal_observations=co_optimal,
        violations=violations,
        issues=issues,
    )
    if not report.all_ok:
        logger.warning("Verification failed: %s", "; ".join(i.message for i in issues))
    return report


def reconstruct_duals(
    region: ImputedRegion, c: Optional[Sequence[float]] = None
) -> tuple[np.ndarray, np.ndarray]:
    """Dual multipliers certifying optimality of x^0 over an imputed region.

    The first known row is the normalized cost half-space ``g_1 x >= h_1``.
    Its multiplier is 1 (or, when ``c`` is given, the positive multiple
    taking ``g_1`` to ``c``); every other multiplier is zero. Hence
    ``G'w + A'y`` equals ``g_1`` (or ``c``) and ``h'w + b'y`` the matching
    optimal value.

    Args:
        region: Imputed region whose known set starts with the cost row
        c: Optional unnormalized cost the certificate should reproduce

    Returns:
        ``(y, w)`` over the imputed and known rows respectively

    Raises:
        ValueError: ``c`` is given and the first known row is not a
            positive multiple of it
    """
    known_set = region.known_set
    w = np.zeros(len(known_set))
    w[0] = 1.0
    if c is not None:
        c = np.asarray(c, dtype=float)
        g1 = np.asarray(known_set.rows[0].a, dtype=float)
        j = int(np.argmax(np.abs(g1)))
        w[0] = c[j] / g1[j]
        if w[0] <= 0.0 or not np.allclose(w[0] * g1, c, atol=1e-9 * max(1.0, np.abs(c).max())):
            raise ValueError("first known row is not a positive multiple of c")
    return np.zeros(len(region.imputed_rows)), w


def robust_preferred_box(x0: Sequence[float], radius: float, c: Sequence[float]) -> np.ndarray:
    """Minimiser of ``c'x`` over the box of half-width ``radius`` around ``x0``."""
    if radius < 0.0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    x0 = np.asarray(x0, dtype=float)
    return x0 - radius * np.sign(np.asarray(c, dtype=float))
