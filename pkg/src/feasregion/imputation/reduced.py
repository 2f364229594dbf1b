"""Fast paths for joint losses when every row faces the same restrictions.

With the sum-proxy normalization and side constraints shared by all rows,
fairness sees the rows only through their sum ``sum_i a_i``; the row
offsets cancel against the mean. The rows of one sign form a convex set,
so the rows of each sign in an optimal set can be replaced by their
average without changing that sum. The fairness stage therefore reduces to
one small LP per count of positive rows, and the reduction is exact.

Compactness has no such structure. Models whose binary count exceeds
``Settings.JOINT_MAX_BINARIES`` pick rows greedily from a pool of
per-observation candidates instead. When fairness was pinned first, the
last row is chosen to restore the pinned row sum, so the fairness value is
kept exactly.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from feasregion.contracts.errors import InfeasibleImputationError
from feasregion.contracts.geometry import NormalizationScheme
from feasregion.contracts.problem import CompactnessLoss, ProblemInstance, SingleLoss
from feasregion.contracts.reports import RowDiagnostics
from feasregion.contracts.solver import Relation, SolveStatus
from feasregion.engine import LinExpr, ModelBuilder, solve
from feasregion.imputation.compactness import compactness_candidates, greedy_compactness_rows
from feasregion.imputation.decomposed import check_status
from feasregion.imputation.rowvars import add_row_vars
from feasregion.util.logging import get_logger

logger = get_logger("imputation.reduced")

Rows = list[tuple[np.ndarray, float]]


def interchangeable_rows(p: ProblemInstance) -> bool:
    """True when rows are sum-proxy normalized and share every side constraint."""
    return p.normalization == NormalizationScheme.sum_proxy and p.rows_share_constraints


def joint_binary_count(p: ProblemInstance, losses: Sequence[SingleLoss]) -> int:
    """Binaries of the joint model over ``losses``: row signs plus nearest-row choices."""
    signs = p.m1 if p.normalization == NormalizationScheme.sum_proxy else p.m1 * p.n
    stages = sum(isinstance(loss, CompactnessLoss) for loss in losses)
    return signs + stages * p.m1 * p.observations.K


@dataclass
class SignClasses:
    """An optimal fairness row set built from one positive and one negative row."""

    plus: int
    rows: Rows
    value: float
    aggregate: np.ndarray
    diagnostics: list[RowDiagnostics] = field(default_factory=list)


def _class_counts(m1: int) -> list[int]:
    """Counts of positive rows to try, balanced splits first."""
    return sorted(range(m1 + 1), key=lambda plus: (abs(2 * plus - m1), -plus))


def _solve_classes(
    p: ProblemInstance, plus: int, tie_break: bool
) -> Optional[tuple[Rows, float, RowDiagnostics]]:
    """Fairness LP with ``plus`` copies of a positive row and the rest negative.

    Args:
        p: Instance with interchangeable rows
        plus: Number of rows with coefficient sum +1
        tie_break: Among fair class rows, also minimise their total slack

    Returns:
        ``(rows, value, diagnostic)``, or None when a class admits no row
    """
    label = f"fairness-classes[{plus}]"
    builder = ModelBuilder(label)
    classes = []
    if plus:
        classes.append((plus, add_row_vars(builder, p, 0, 1)))
    if p.m1 - plus:
        classes.append((p.m1 - plus, add_row_vars(builder, p, 0, -1)))

    points = p.observations.points
    totals = [LinExpr.total(row.slack(x) * count for count, row in classes) for x in points]
    mean = LinExpr.total(totals) * (1.0 / len(points))
    u = builder.add_vars("u", len(points), lower=0.0)
    for k, total in enumerate(totals):
        builder.add_constraint(u[k] - total + mean, Relation.ge, 0.0)
        builder.add_constraint(u[k] + total - mean, Relation.ge, 0.0)
    spread = LinExpr.total(u)
    builder.set_objective(spread)

    result = solve(builder.build())
    if not check_status(result, label):
        return None
    solution = result.solution
    value = spread.value(solution)
    iterations = result.iterations

    if tie_break:
        builder.add_constraint(spread, Relation.le, value, name="pin[fairness]")
        builder.set_objective(LinExpr.total(totals))
        tidy = solve(builder.build())
        if tidy.status == SolveStatus.optimal:
            solution = tidy.solution
            iterations += tidy.iterations
        else:
            logger.debug("%s: tie-break returned %s", label, tidy.status.value)

    rows: Rows = []
    for count, row in classes:
        a, b = row.values(solution)
        rows.extend((a.copy(), b) for _ in range(count))
    diagnostic = RowDiagnostics(label=label, objective=value, iterations=iterations)
    return rows, value, diagnostic


def solve_fairness_classes(p: ProblemInstance, tie_break: bool = True) -> SignClasses:
    """Exact fairness optimum for interchangeable rows.

    Counts of positive rows are tried from the most balanced split outwards
    and the search stops at the first zero optimum; otherwise the lowest
    value wins, earlier counts on ties.

    Raises:
        InfeasibleImputationError: no sign split admits feasible rows
    """
    best: Optional[SignClasses] = None
    diagnostics = []
    for plus in _class_counts(p.m1):
        outcome = _solve_classes(p, plus, tie_break)
        if outcome is None:
            continue
        rows, value, diagnostic = outcome
        diagnostics.append(diagnostic)
        if best is None or value < best.value - 1e-9 * max(1.0, abs(best.value)):
            aggregate = np.sum([a for a, _ in rows], axis=0)
            best = SignClasses(plus=plus, rows=rows, value=value, aggregate=aggregate)
        if best.value <= 1e-9:
            break
    if best is None:
        raise InfeasibleImputationError(
            "no feasible fairness rows; side constraints contradict the observations",
            subproblem="fairness-classes",
        )
    best.diagnostics = diagnostics
    logger.debug("Fairness classes: %d positive rows, value %.9g", best.plus, best.value)
    return best


def _tight(X: np.ndarray, a: np.ndarray) -> tuple[np.ndarray, float]:
    return a, float((X @ a).min())


def _nearest_total(X: np.ndarray, rows: Rows) -> float:
    A = np.array([a for a, _ in rows], dtype=float)
    b = np.array([b for _, b in rows], dtype=float)
    return float((A @ X.T - b[:, None]).min(axis=0).sum())


def pooled_compactness(
    p: ProblemInstance, pinned: Optional[SignClasses] = None
) -> tuple[Rows, float]:
    """Greedy compactness rows from the candidate pool.

    Without ``pinned`` the ``m1`` rows come straight from the pool. With a
    pinned fairness optimum, ``m1 - 1`` pool rows are chosen under sign
    quotas and one balancing row ``sum(pinned) - sum(chosen)`` completes
    the set; the replicated class rows are kept when they score better.
    Right-hand sides are raised to the nearest observation unless side
    constraints are present.

    Args:
        p: Instance with interchangeable rows
        pinned: Fairness classes the rows must keep the row sum of

    Returns:
        ``(rows, sum_k min_i d_ik)``

    Raises:
        InfeasibleImputationError: the pool is empty
    """
    X = p.observations.matrix
    tighten = not p.side_constraints
    candidates = compactness_candidates(p)
    if not candidates:
        raise InfeasibleImputationError("no candidate rows for compactness", subproblem="pool")
    if tighten:
        candidates = [_tight(X, a) for a, _ in candidates]
    distances = np.array([X @ a - b for a, b in candidates])

    if pinned is None:
        chosen = greedy_compactness_rows(candidates, distances, p.m1)
        rows = [candidates[c] for c in chosen]
        return rows, _nearest_total(X, rows)

    options: list[Rows] = [
        [_tight(X, a) for a, _ in pinned.rows] if tighten else list(pinned.rows)
    ]
    if tighten and p.m1 > 1:
        minus = p.m1 - pinned.plus
        quotas = []
        if pinned.plus:
            quotas.append((pinned.plus - 1, minus))
        if minus:
            quotas.append((pinned.plus, minus - 1))
        for quota in quotas:
            chosen = greedy_compactness_rows(candidates, distances, p.m1 - 1, quotas=quota)
            if len(chosen) < p.m1 - 1:
                continue
            rows = [candidates[c] for c in chosen]
            balance = pinned.aggregate - np.sum([a for a, _ in rows], axis=0)
            options.append(rows + [_tight(X, balance)])

    values = [_nearest_total(X, rows) for rows in options]
    pick = int(np.argmin(values))
    logger.debug("Pooled compactness: %d options, best %.9g", len(options), values[pick])
    return options[pick], values[pick]
