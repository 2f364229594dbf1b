"""Per-row subproblems for losses that decompose over the imputed rows."""

from collections.abc import Callable
from dataclasses import dataclass
from typing import Optional

import numpy as np

from feasregion.config import get_settings
from feasregion.contracts.errors import (
    InfeasibleImputationError,
    InternalInconsistencyError,
    SolverLimitError,
)
from feasregion.contracts.problem import ProblemInstance
from feasregion.contracts.reports import RowDiagnostics
from feasregion.contracts.solver import Relation, SolverResult, SolveStatus
from feasregion.engine import LinExpr, ModelBuilder, solve
from feasregion.imputation.rowvars import Branch, RowVars, add_row_vars, sign_branches
from feasregion.util.logging import get_logger

logger = get_logger("imputation.decomposed")

# (builder, row) -> (linear objective, diagonal quadratic terms or None)
ObjectiveFn = Callable[[ModelBuilder, RowVars], tuple[LinExpr, Optional[dict[int, float]]]]
ExtraFn = Callable[[ModelBuilder, RowVars], None]


@dataclass
class RowBranch:
    """A solved sign branch of one row subproblem."""

    branch: Branch
    builder: ModelBuilder
    row: RowVars
    objective: LinExpr
    quadratic: bool
    result: SolverResult

    @property
    def value(self) -> float:
        return float(self.result.objective_value)

    def row_values(self) -> tuple[np.ndarray, float]:
        return self.row.values(self.result.solution)


@dataclass
class RowSolution:
    a: np.ndarray
    b: float
    objective: float
    diagnostics: RowDiagnostics


def check_status(result: SolverResult, label: str) -> bool:
    """True when optimal, False when infeasible; raise on anything else."""
    if result.status == SolveStatus.optimal:
        return True
    if result.status == SolveStatus.infeasible:
        return False
    if result.status == SolveStatus.iteration_limit:
        raise SolverLimitError(
            f"solver limit reached in {label}", subproblem=label, message=result.message
        )
    raise InternalInconsistencyError(f"{label} is unbounded", subproblem=label)


def solve_branch(
    p: ProblemInstance,
    index: int,
    branch: Branch,
    objective_fn: ObjectiveFn,
    label: str,
    extra: Optional[ExtraFn] = None,
) -> Optional[RowBranch]:
    """Build and solve one sign branch of row ``index``.

    Args:
        p: Problem instance
        index: Imputed row, selecting its side constraints
        branch: Sign or orthant fixed for this subproblem
        objective_fn: Adds auxiliaries and returns the objective
        label: Subproblem name for logs and errors
        extra: Optional hook adding constraints before the objective

    Returns:
        The solved branch, or None when it is infeasible

    Raises:
        SolverLimitError: the pivot or node cap was reached
    """
    builder = ModelBuilder(label)
    row = add_row_vars(builder, p, index, branch)
    if extra is not None:
        extra(builder, row)
    objective, quadratic = objective_fn(builder, row)
    builder.set_objective(objective, quadratic)
    result = solve(builder.build())
    if not check_status(result, label):
        return None
    return RowBranch(branch, builder, row, objective, bool(quadratic), result)


def solve_all_branches(
    p: ProblemInstance,
    index: int,
    objective_fn: ObjectiveFn,
    label: str,
    quadratic: bool = False,
    extra: Optional[ExtraFn] = None,
) -> list[RowBranch]:
    solved = []
    for branch in sign_branches(p, quadratic=quadratic):
        outcome = solve_branch(p, index, branch, objective_fn, f"{label}{branch_tag(branch)}", extra)
        if outcome is not None:
            solved.append(outcome)
    return solved


def branch_tag(branch: Branch) -> str:
    if branch is None:
        return ""
    if isinstance(branch, int):
        return "+" if branch > 0 else "-"
    return "[" + "".join("+" if s > 0 else "-" for s in branch) + "]"


def best_branch(branches: list[RowBranch]) -> Optional[RowBranch]:
    """Lowest objective; earlier branches win ties."""
    best = None
    for candidate in branches:
        if best is None or candidate.value < best.value - 1e-9 * max(1.0, abs(best.value)):
            best = candidate
    return best


def canonicalize_branch(winner: RowBranch, index: int, n: int, epsilon: float) -> RowBranch:
    """Among rows within ``epsilon`` of the optimum, minimise ``a_{i, i mod n}``."""
    builder = winner.builder.copy()
    builder.add_constraint(
        winner.objective, Relation.le, winner.value + epsilon, name="pin[objective]"
    )
    builder.set_objective(winner.row.a[index % n])
    result = solve(builder.build(), initial_solution=winner.result.solution)
    if result.status != SolveStatus.optimal:
        logger.debug("Canonical re-solve returned %s; keeping first optimum", result.status.value)
        return winner
    # report the loss at the canonical point, not the coordinate objective
    return RowBranch(
        winner.branch,
        builder,
        winner.row,
        winner.objective,
        False,
        result.model_copy(update={"objective_value": winner.objective.value(result.solution)}),
    )


def solve_row(
    p: ProblemInstance,
    index: int,
    objective_fn: ObjectiveFn,
    label: str,
    quadratic: bool = False,
    canonicalize: bool = False,
) -> RowSolution:
    """Solve every sign branch of row ``index`` and keep the best.

    Raises:
        InfeasibleImputationError: no branch admits a feasible row
    """
    branches = solve_all_branches(p, index, objective_fn, label, quadratic=quadratic)
    winner = best_branch(branches)
    if winner is None:
        raise InfeasibleImputationError(
            f"no feasible row for {label}; side constraints contradict the observations",
            row=index,
        )
    iterations = sum(b.result.iterations for b in branches)
    nodes = sum(b.result.node_count for b in branches)

    if canonicalize and not quadratic:
        winner = canonicalize_branch(winner, index, p.n, get_settings().COMBINED_EPSILON)
        iterations += winner.result.iterations
        nodes += winner.result.node_count

    a, b = winner.row_values()
    logger.debug("%s: objective %.9g (%d branches solved)", label, winner.value, len(branches))
    return RowSolution(
        a=a,
        b=b,
        objective=winner.value,
        diagnostics=RowDiagnostics(
            row=index,
            label=label,
            sign=winner.branch if isinstance(winner.branch, int) else None,
            objective=winner.value,
            iterations=iterations,
            node_count=nodes,
        ),
    )


# ---------------------------------------------------------------------------
# Objectives
# ---------------------------------------------------------------------------


def adjacency_objective(p: ProblemInstance) -> ObjectiveFn:
    """Total slack of all observations in the row."""

    def build(builder: ModelBuilder, row: RowVars):
        return LinExpr.total(row.slack(x) for x in p.observations.points), None

    return build


def slack_objective(point) -> ObjectiveFn:
    """Slack of a single observation in the row."""

    def build(builder: ModelBuilder, row: RowVars):
        return row.slack(point), None

    return build


def adherence_l1_objective(prior_a, prior_b: float, weight: float) -> ObjectiveFn:
    """``weight * (||a - a_hat||_1 + |b - b_hat|)`` through split deviations."""

    def build(builder: ModelBuilder, row: RowVars):
        tag = f"[{row.index}]"
        total = LinExpr()
        pairs = list(zip(row.a, prior_a)) + [(row.b, prior_b)]
        for j, (expr, target) in enumerate(pairs):
            dev = builder.add_var(f"dev{tag}[{j}]", lower=0.0)
            builder.add_constraint(dev - expr, Relation.ge, -float(target))
            builder.add_constraint(dev + expr, Relation.ge, float(target))
            total.add_inplace(dev)
        return total * weight, None

    return build


def adherence_l2_objective(prior_a, prior_b: float, weight: float) -> ObjectiveFn:
    """``weight * (||a - a_hat||_2^2 + (b - b_hat)^2)`` as a diagonal QP."""

    def build(builder: ModelBuilder, row: RowVars):
        linear = LinExpr()
        quadratic: dict[int, float] = {}
        pairs = list(zip(row.a, prior_a)) + [(row.b, prior_b)]
        for expr, target in pairs:
            (index,) = expr.terms
            quadratic[index] = weight
            linear.add_inplace(expr, -2.0 * weight * float(target))
            linear.add_inplace(weight * float(target) ** 2)
        return linear, quadratic

    return build
