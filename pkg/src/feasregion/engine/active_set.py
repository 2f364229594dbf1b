"""Active-set enumeration for small convex QPs with a diagonal quadratic term."""

import itertools
from typing import Optional

import numpy as np

from feasregion.config import get_settings
from feasregion.contracts.errors import SizeGuardError
from feasregion.contracts.solver import SolveStatus, SolverModel, SolverResult
from feasregion.engine.arrays import EQ, GE, LE, model_arrays
from feasregion.util.logging import get_logger

logger = get_logger("engine.active_set")

_RESIDUAL_TOL = 1e-9
_MULTIPLIER_TOL = 1e-9


def _inequalities(arr) -> tuple[np.ndarray, np.ndarray]:
    """All inequality rows and finite bounds as ``G x >= h``."""
    blocks = [arr.A[arr.sense == GE], -arr.A[arr.sense == LE]]
    rhs = [arr.rhs[arr.sense == GE], -arr.rhs[arr.sense == LE]]
    eye = np.eye(arr.num_vars)
    finite_lower = np.isfinite(arr.lower)
    finite_upper = np.isfinite(arr.upper)
    blocks += [eye[finite_lower], -eye[finite_upper]]
    rhs += [arr.lower[finite_lower], -arr.upper[finite_upper]]
    return np.vstack(blocks), np.concatenate(rhs)


def solve_qp_activeset(model: SolverModel) -> SolverResult:
    """Minimise ``sum q_j x_j^2 + c.x + c0`` over linear rows by active-set enumeration.

    Subsets of inequality rows are tried in order of increasing size. For
    each subset the KKT system of the equality-constrained problem is
    solved; a candidate is accepted when it is primal feasible and every
    multiplier of an active inequality is nonnegative. For a convex
    objective every such point is a global minimiser, so the search stops
    after the first subset size that yields one and returns the best of
    that size.

    Raises:
        SizeGuardError: Too many variables or inequality rows to enumerate
    """
    if model.quadratic_diag is None:
        raise ValueError("solve_qp_activeset requires quadratic_diag")
    if model.is_mixed_integer:
        raise ValueError("solve_qp_activeset does not accept binary variables")

    settings = get_settings()
    arr = model_arrays(model)
    n = arr.num_vars
    G, h = _inequalities(arr)
    E, e = arr.A[arr.sense == EQ], arr.rhs[arr.sense == EQ]

    if n > settings.QP_MAX_VARS or G.shape[0] > settings.QP_MAX_ROWS:
        raise SizeGuardError(
            "QP too large for active-set enumeration; use the L1 adherence distance",
            num_vars=n,
            inequality_rows=int(G.shape[0]),
            max_vars=settings.QP_MAX_VARS,
            max_rows=settings.QP_MAX_ROWS,
        )

    Q2 = np.diag(2.0 * arr.q)
    free_dims = n - (np.linalg.matrix_rank(E) if E.shape[0] else 0)
    max_active = min(free_dims, G.shape[0])
    feas_tol = settings.FEASIBILITY_TOL

    best_x: Optional[np.ndarray] = None
    best_value = np.inf
    examined = 0

    for size in range(max_active + 1):
        for active in itertools.combinations(range(G.shape[0]), size):
            examined += 1
            W = G[list(active)]
            rows = np.vstack([E, W]) if size else E
            k = rows.shape[0]
            kkt = np.zeros((n + k, n + k))
            kkt[:n, :n] = Q2
            kkt[:n, n:] = -rows.T
            kkt[n:, :n] = rows
            rhs = np.concatenate([-arr.c, e, h[list(active)]])

            solution, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
            if np.linalg.norm(kkt @ solution - rhs) > _RESIDUAL_TOL * max(1.0, np.abs(rhs).max()):
                continue
            x = solution[:n]
            multipliers = solution[n + E.shape[0] :]
            if np.any(multipliers < -_MULTIPLIER_TOL):
                continue
            if G.shape[0] and np.any(G @ x < h - feas_tol):
                continue
            if E.shape[0] and np.any(np.abs(E @ x - e) > feas_tol):
                continue

            value = arr.objective(x)
            if value < best_value - 1e-12:
                best_x, best_value = x, value

        if best_x is not None:
            break

    logger.debug("Active-set QP examined %d subsets", examined)
    if best_x is None:
        return SolverResult(status=SolveStatus.infeasible, iterations=examined)
    return SolverResult(
        status=SolveStatus.optimal,
        solution=best_x.tolist(),
        objective_value=best_value,
        iterations=examined,
    )
