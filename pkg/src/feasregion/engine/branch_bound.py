"""Best-first branch-and-bound over LP relaxations for binary MILPs."""

import heapq
import itertools
from collections.abc import Sequence
from typing import Optional

import numpy as np

from feasregion.config import get_settings
from feasregion.contracts.solver import SolveStatus, SolverModel, SolverResult
from feasregion.engine.arrays import ModelArrays, model_arrays
from feasregion.engine.simplex import solve_arrays
from feasregion.util.logging import get_logger

logger = get_logger("engine.branch_bound")


def _prune_gap(incumbent: float) -> float:
    return 1e-9 * max(1.0, abs(incumbent))


def _accept_start(
    arr: ModelArrays, binaries: np.ndarray, start: Sequence[float]
) -> Optional[np.ndarray]:
    """Return the start snapped to integral binaries, or None if unusable.

    Args:
        arr: Dense model arrays
        binaries: Indices of the binary variables
        start: Candidate incumbent, one value per variable

    Returns:
        The snapped start when it has the right length, near-integral
        binaries and rows violated by at most ten times the feasibility
        tolerance; None otherwise
    """
    settings = get_settings()
    x = np.asarray(start, dtype=float)
    if x.shape != (arr.num_vars,):
        logger.warning("Discarding MILP start of length %d (expected %d)", x.size, arr.num_vars)
        return None
    xb = x[binaries]
    if np.any(np.abs(xb - np.round(xb)) > settings.INTEGRALITY_TOL):
        logger.warning("Discarding MILP start: binary entries are not integral")
        return None
    x = x.copy()
    x[binaries] = np.round(xb)
    violation = arr.max_violation(x)
    if violation > settings.FEASIBILITY_TOL * 10:
        logger.warning("Discarding MILP start: violates a row by %.3g", violation)
        return None
    return x


def solve_milp(
    model: SolverModel,
    *,
    node_limit: Optional[int] = None,
    pivot_limit: Optional[int] = None,
    initial_solution: Optional[Sequence[float]] = None,
) -> SolverResult:
    """Solve a MILP whose integral variables are all binary.

    Nodes are explored best-bound first, ties going to the deeper node and
    then to creation order. The most fractional binary is branched on,
    lowest index first among equals.

    Args:
        model: Model with at least one binary variable
        node_limit: Optional override of ``SOLVER_NODE_LIMIT``
        pivot_limit: Optional per-relaxation pivot cap
        initial_solution: Optional feasible point used as the first incumbent

    Returns:
        SolverResult; ``node_count`` counts solved relaxations
    """
    if not model.is_mixed_integer:
        raise ValueError("solve_milp requires at least one binary variable")
    if model.is_quadratic:
        raise ValueError("solve_milp does not accept quadratic objectives")

    settings = get_settings()
    node_limit = node_limit if node_limit is not None else settings.SOLVER_NODE_LIMIT
    int_tol = settings.INTEGRALITY_TOL

    arr = model_arrays(model)
    binaries = np.flatnonzero(arr.binary)

    best_x: Optional[np.ndarray] = None
    best_value = np.inf
    if initial_solution is not None:
        start = _accept_start(arr, binaries, initial_solution)
        if start is not None:
            best_x, best_value = start, arr.objective(start)
            logger.debug("MILP start accepted with objective %.9g", best_value)

    counter = itertools.count()
    heap: list[tuple[float, int, int, np.ndarray, np.ndarray]] = [
        (-np.inf, 0, next(counter), arr.lower.copy(), arr.upper.copy())
    ]
    nodes = 0
    pivots = 0

    while heap:
        bound, neg_depth, _, lower, upper = heapq.heappop(heap)
        if bound >= best_value - _prune_gap(best_value):
            continue
        if nodes >= node_limit:
            logger.warning("Node limit %d reached with %d open nodes", node_limit, len(heap) + 1)
            return SolverResult(
                status=SolveStatus.iteration_limit,
                node_count=nodes,
                iterations=pivots,
                message=f"node limit {node_limit} reached",
            )

        nodes += 1
        relaxation = solve_arrays(arr, lower, upper, pivot_limit=pivot_limit)
        pivots += relaxation.pivots

        if relaxation.status == SolveStatus.infeasible:
            continue
        if relaxation.status == SolveStatus.iteration_limit:
            return SolverResult(
                status=SolveStatus.iteration_limit,
                node_count=nodes,
                iterations=pivots,
                message="pivot limit reached in a relaxation",
            )
        if relaxation.status == SolveStatus.unbounded:
            return SolverResult(
                status=SolveStatus.unbounded, node_count=nodes, iterations=pivots
            )
        if relaxation.objective >= best_value - _prune_gap(best_value):
            continue

        x = relaxation.x
        xb = x[binaries]
        fractionality = np.minimum(xb - np.floor(xb), np.ceil(xb) - xb)
        if binaries.size == 0 or fractionality.max() <= int_tol:
            x = x.copy()
            x[binaries] = np.round(xb)
            best_x, best_value = x, arr.objective(x)
            logger.debug("Incumbent %.9g at node %d", best_value, nodes)
            continue

        k = int(np.argmax(fractionality))
        j = int(binaries[k])
        down_upper = upper.copy()
        down_upper[j] = 0.0
        up_lower = lower.copy()
        up_lower[j] = 1.0
        children = [(lower, down_upper), (up_lower, upper)]
        if xb[k] >= 0.5:
            children.reverse()
        for child_lower, child_upper in children:
            heapq.heappush(
                heap,
                (relaxation.objective, neg_depth - 1, next(counter), child_lower, child_upper),
            )

    logger.debug("Branch-and-bound finished: %d nodes, %d pivots", nodes, pivots)
    if best_x is None:
        return SolverResult(status=SolveStatus.infeasible, node_count=nodes, iterations=pivots)
    return SolverResult(
        status=SolveStatus.optimal,
        solution=best_x.tolist(),
        objective_value=best_value,
        node_count=nodes,
        iterations=pivots,
    )
