"""Self-contained dense solvers: simplex LP, branch-and-bound MILP, active-set QP."""

from collections.abc import Sequence
from typing import Optional

from feasregion.contracts.solver import SolverModel, SolverResult
from feasregion.engine.active_set import solve_qp_activeset
from feasregion.engine.branch_bound import solve_milp
from feasregion.engine.builder import LinExpr, ModelBuilder, dot
from feasregion.engine.simplex import solve_lp


def solve(model: SolverModel, initial_solution: Optional[Sequence[float]] = None) -> SolverResult:
    """Dispatch a model to the matching solver."""
    if model.is_quadratic:
        return solve_qp_activeset(model)
    if model.is_mixed_integer:
        return solve_milp(model, initial_solution=initial_solution)
    return solve_lp(model)


__all__ = [
    "LinExpr",
    "ModelBuilder",
    "dot",
    "solve",
    "solve_lp",
    "solve_milp",
    "solve_qp_activeset",
]
