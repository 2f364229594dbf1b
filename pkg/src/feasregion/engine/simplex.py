"""Dense two-phase primal simplex.

Variables are mapped to a nonnegative standard form (shift by finite lower
bounds, mirror variables with only an upper bound, split free variables,
turn remaining finite upper bounds into rows). Rows are sign-normalised so
every right-hand side is nonnegative, then phase 1 minimises the sum of
artificial variables and phase 2 the true objective on the same tableau.

Pivoting uses Dantzig's rule with lowest-index ties and falls back to
Bland's rule once too many degenerate pivots have been taken in a row.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from feasregion.config import get_settings
from feasregion.contracts.solver import SolveStatus, SolverModel, SolverResult
from feasregion.engine.arrays import EQ, GE, LE, ModelArrays, model_arrays
from feasregion.util.logging import get_logger

logger = get_logger("engine.simplex")

PIVOT_TOL = 1e-9
COST_TOL = 1e-9


@dataclass
class LPOutcome:
    """Raw result of the simplex kernel on a :class:`ModelArrays`."""

    status: SolveStatus
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    duals: Optional[np.ndarray] = None
    pivots: int = 0


@dataclass
class _PivotState:
    limit: int
    bland_after: int
    pivots: int = 0
    degenerate_run: int = 0
    bland: bool = False


@dataclass
class _StandardForm:
    """``A_std y (senses) b_std``, ``y >= 0`` plus the map back to ``x``."""

    A: np.ndarray
    sense: np.ndarray
    b: np.ndarray
    c: np.ndarray
    c0: float
    to_x: np.ndarray
    offset: np.ndarray
    num_model_rows: int
    flip: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _standard_form(arr: ModelArrays, lower: np.ndarray, upper: np.ndarray) -> _StandardForm:
    """Shift and split variables so every column is nonnegative.

    Fixed variables become constants, one-sided bounds are shifted (and
    mirrored when only the upper bound is finite), free variables are split
    into two columns, and finite upper bounds on shifted columns become
    extra ``<=`` rows.

    Args:
        arr: Dense model arrays
        lower: Per-variable lower bounds, possibly tightened by branching
        upper: Per-variable upper bounds

    Returns:
        The standard-form problem and the affine map back to the model variables
    """
    n = arr.num_vars
    offset = np.zeros(n)
    columns: list[tuple[int, float]] = []
    upper_rows: list[tuple[int, float]] = []

    for j in range(n):
        lo, hi = lower[j], upper[j]
        if np.isfinite(lo) and np.isfinite(hi) and lo == hi:
            offset[j] = lo
        elif np.isfinite(lo):
            offset[j] = lo
            columns.append((j, 1.0))
            if np.isfinite(hi):
                upper_rows.append((len(columns) - 1, hi - lo))
        elif np.isfinite(hi):
            offset[j] = hi
            columns.append((j, -1.0))
        else:
            columns.append((j, 1.0))
            columns.append((j, -1.0))

    to_x = np.zeros((n, len(columns)))
    for col, (j, sign) in enumerate(columns):
        to_x[j, col] = sign

    A = arr.A @ to_x
    b = arr.rhs - arr.A @ offset
    sense = arr.sense.copy()
    if upper_rows:
        bound_block = np.zeros((len(upper_rows), len(columns)))
        for r, (col, width) in enumerate(upper_rows):
            bound_block[r, col] = 1.0
        A = np.vstack([A, bound_block])
        b = np.concatenate([b, [width for _, width in upper_rows]])
        sense = np.concatenate([sense, np.full(len(upper_rows), LE)])

    return _StandardForm(
        A=A,
        sense=sense,
        b=b,
        c=arr.c @ to_x,
        c0=arr.c0 + float(arr.c @ offset),
        to_x=to_x,
        offset=offset,
        num_model_rows=arr.num_rows,
    )


def _pivot(tableau: np.ndarray, cost: np.ndarray, r: int, j: int) -> None:
    tableau[r] /= tableau[r, j]
    column = tableau[:, j].copy()
    column[r] = 0.0
    tableau -= np.outer(column, tableau[r])
    cost -= cost[j] * tableau[r]
    np.maximum(tableau[:, -1], 0.0, out=tableau[:, -1], where=tableau[:, -1] > -PIVOT_TOL)


def _iterate(
    tableau: np.ndarray,
    cost: np.ndarray,
    basis: np.ndarray,
    num_cols: int,
    state: _PivotState,
) -> SolveStatus:
    """Run primal simplex pivots until optimal, unbounded or out of budget.

    Dantzig pricing switches to Bland's rule after
    ``BLAND_AFTER_DEGENERATE`` degenerate pivots in a row.

    Args:
        tableau: Constraint rows with the right-hand side last, updated in place
        cost: Reduced-cost row, updated in place
        basis: Basic column of each row, updated in place
        num_cols: Columns eligible to enter
        state: Pivot counters shared by both phases

    Returns:
        ``optimal``, ``unbounded`` or ``iteration_limit``
    """
    if num_cols == 0:
        return SolveStatus.optimal
    while True:
        reduced = cost[:num_cols]
        if state.bland:
            improving = np.flatnonzero(reduced < -COST_TOL)
            if improving.size == 0:
                return SolveStatus.optimal
            j = int(improving[0])
        else:
            j = int(np.argmin(reduced))
            if reduced[j] >= -COST_TOL:
                return SolveStatus.optimal

        column = tableau[:, j]
        eligible = column > PIVOT_TOL
        if not eligible.any():
            return SolveStatus.unbounded

        ratios = np.full(column.shape[0], np.inf)
        ratios[eligible] = tableau[eligible, -1] / column[eligible]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12 * max(1.0, abs(best)))
        r = int(ties[np.argmin(basis[ties])])

        if state.pivots >= state.limit:
            return SolveStatus.iteration_limit

        if best <= PIVOT_TOL:
            state.degenerate_run += 1
            if not state.bland and state.degenerate_run >= state.bland_after:
                logger.warning(
                    "Switching to Bland's rule after %d degenerate pivots", state.degenerate_run
                )
                state.bland = True
        else:
            state.degenerate_run = 0

        _pivot(tableau, cost, r, j)
        basis[r] = j
        state.pivots += 1


def solve_arrays(
    arr: ModelArrays,
    lower: Optional[np.ndarray] = None,
    upper: Optional[np.ndarray] = None,
    *,
    pivot_limit: Optional[int] = None,
    bland_after: Optional[int] = None,
) -> LPOutcome:
    """Solve the LP described by ``arr`` with the given variable bounds."""
    settings = get_settings()
    lower = arr.lower if lower is None else lower
    upper = arr.upper if upper is None else upper
    if np.any(lower > upper):
        return LPOutcome(status=SolveStatus.infeasible)

    state = _PivotState(
        limit=pivot_limit if pivot_limit is not None else settings.SOLVER_PIVOT_LIMIT,
        bland_after=bland_after if bland_after is not None else settings.BLAND_AFTER_DEGENERATE,
    )

    sf = _standard_form(arr, lower, upper)
    m, n_struct = sf.A.shape

    flip = np.where(sf.b < 0, -1.0, 1.0)
    A = sf.A * flip[:, None]
    b = sf.b * flip
    sense = sf.sense.copy()
    flipped = flip < 0
    sense[flipped & (sf.sense == GE)] = LE
    sense[flipped & (sf.sense == LE)] = GE
    sf.flip = flip

    slack_rows = np.flatnonzero(sense != EQ)
    art_rows = np.flatnonzero(sense != LE)
    n_slack, n_art = slack_rows.size, art_rows.size
    n_real = n_struct + n_slack

    tableau = np.zeros((m, n_real + n_art + 1))
    tableau[:, :n_struct] = A
    for s, r in enumerate(slack_rows):
        tableau[r, n_struct + s] = 1.0 if sense[r] == LE else -1.0
    for t, r in enumerate(art_rows):
        tableau[r, n_real + t] = 1.0
    tableau[:, -1] = b
    std_matrix = tableau[:, :n_real].copy()

    basis = np.empty(m, dtype=int)
    for s, r in enumerate(slack_rows):
        if sense[r] == LE:
            basis[r] = n_struct + s
    for t, r in enumerate(art_rows):
        basis[r] = n_real + t

    # phase 1
    if n_art:
        cost = np.zeros(n_real + n_art + 1)
        cost[n_real : n_real + n_art] = 1.0
        cost -= tableau[art_rows].sum(axis=0)
        status = _iterate(tableau, cost, basis, n_real + n_art, state)
        if status == SolveStatus.iteration_limit:
            return LPOutcome(status=status, pivots=state.pivots)
        infeasibility = -cost[-1]
        if infeasibility > settings.FEASIBILITY_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LPOutcome(status=SolveStatus.infeasible, pivots=state.pivots)

        keep = np.ones(m, dtype=bool)
        for r in range(m):
            if basis[r] < n_real:
                continue
            candidates = np.flatnonzero(np.abs(tableau[r, :n_real]) > PIVOT_TOL)
            if candidates.size:
                _pivot(tableau, cost, r, int(candidates[0]))
                basis[r] = int(candidates[0])
            else:
                keep[r] = False
        tableau = np.hstack([tableau[keep, :n_real], tableau[keep, -1:]])
        basis = basis[keep]
        row_index = np.flatnonzero(keep)
    else:
        tableau = np.hstack([tableau[:, :n_real], tableau[:, -1:]])
        row_index = np.arange(m)

    # phase 2
    c_real = np.concatenate([sf.c, np.zeros(n_slack)])
    cost = np.concatenate([c_real, [0.0]])
    cost -= c_real[basis] @ tableau
    status = _iterate(tableau, cost, basis, n_real, state)
    if status != SolveStatus.optimal:
        return LPOutcome(status=status, pivots=state.pivots)

    values = np.zeros(n_real)
    values[basis] = tableau[:, -1]
    duals_std = np.zeros(m)
    if basis.size:
        B = std_matrix[row_index][:, basis]
        try:
            polished = np.linalg.solve(B, b[row_index])
            if np.all(np.isfinite(polished)) and np.allclose(
                polished, tableau[:, -1], atol=1e-6, rtol=1e-9
            ):
                values[basis] = np.where(polished < 0.0, 0.0, polished)
            duals_std[row_index] = np.linalg.solve(B.T, c_real[basis])
        except np.linalg.LinAlgError:
            logger.debug("Singular final basis; keeping tableau values")

    x = sf.offset + sf.to_x @ values[:n_struct]
    duals = (flip * duals_std)[: sf.num_model_rows]
    return LPOutcome(
        status=SolveStatus.optimal,
        x=x,
        objective=arr.objective(x),
        duals=duals,
        pivots=state.pivots,
    )


def solve_lp(model: SolverModel, *, pivot_limit: Optional[int] = None) -> SolverResult:
    """Solve a linear program.

    Args:
        model: Model without integrality flags or quadratic terms
        pivot_limit: Optional override of ``SOLVER_PIVOT_LIMIT``

    Returns:
        SolverResult with row duals when optimal
    """
    if model.is_mixed_integer:
        raise ValueError("solve_lp received a model with binary variables; use solve_milp")
    if model.is_quadratic:
        raise ValueError("solve_lp received a quadratic model; use solve_qp_activeset")

    arr = model_arrays(model)
    outcome = solve_arrays(arr, pivot_limit=pivot_limit)
    logger.debug(
        "LP %s after %d pivots (%d vars, %d rows)",
        outcome.status.value,
        outcome.pivots,
        arr.num_vars,
        arr.num_rows,
    )

    if outcome.status != SolveStatus.optimal:
        return SolverResult(status=outcome.status, iterations=outcome.pivots)

    violation = arr.max_violation(outcome.x)
    if violation > get_settings().FEASIBILITY_TOL:
        logger.warning("LP solution violates a row by %.3g", violation)

    return SolverResult(
        status=SolveStatus.optimal,
        solution=outcome.x.tolist(),
        objective_value=outcome.objective,
        duals=outcome.duals.tolist(),
        iterations=outcome.pivots,
    )
