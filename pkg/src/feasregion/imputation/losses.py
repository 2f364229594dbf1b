"""Imputation entry points, one per loss, and the ``impute`` dispatcher."""

from collections.abc import Sequence
from typing import Optional

import numpy as np

from feasregion.config import get_settings
from feasregion.contracts.errors import DimensionMismatchError
from feasregion.contracts.geometry import ConstraintRow, NormalizationScheme, Polyhedron
from feasregion.contracts.problem import (
    AdherenceLoss,
    AdjacencyLoss,
    CombinedLoss,
    CompactnessLoss,
    FairnessLoss,
    IndifferenceLoss,
    LossSpec,
    ProblemInstance,
    SingleLoss,
)
from feasregion.contracts.reports import ImputedRegion, RowDiagnostics
from feasregion.contracts.solver import Relation
from feasregion.engine import LinExpr
from feasregion.forward import verify_imputation
from feasregion.geometry import half_space_of_cost, normalize_row, row_is_normalized
from feasregion.imputation.decomposed import (
    adherence_l1_objective,
    adherence_l2_objective,
    adjacency_objective,
    solve_row,
)
from feasregion.imputation.joint import Rows, solve_stages
from feasregion.imputation.known_set import assemble_region, build_known_set
from feasregion.util.logging import get_logger

logger = get_logger("imputation")


def evaluate_loss(p: ProblemInstance, loss: SingleLoss, A: np.ndarray, b: np.ndarray) -> float:
    """Value of a single loss at the rows ``A x >= b``."""
    A = np.asarray(A, dtype=float).reshape(-1, p.n)
    b = np.asarray(b, dtype=float)
    D = A @ p.observations.matrix.T - b[:, None]

    if isinstance(loss, IndifferenceLoss):
        return 0.0
    if isinstance(loss, AdjacencyLoss):
        return float(D.sum())
    if isinstance(loss, FairnessLoss):
        totals = D.sum(axis=0)
        return float(np.abs(totals - totals.mean()).sum())
    if isinstance(loss, CompactnessLoss):
        return float(D.min(axis=0).sum())
    if isinstance(loss, AdherenceLoss):
        delta = np.column_stack([A - loss.prior.A, b - loss.prior.b])
        weights = np.array([loss.weight(i) for i in range(len(b))])
        if loss.distance == "l1":
            return float(weights @ np.abs(delta).sum(axis=1))
        return float(weights @ np.linalg.norm(delta, axis=1))
    raise ValueError(f"cannot evaluate {type(loss).__name__}")


def _satisfies_side(p: ProblemInstance, index: int, a: np.ndarray, b: float) -> bool:
    tol = get_settings().FEASIBILITY_TOL
    for side in p.side_constraints_for(index):
        lhs = float(np.dot(side.a_coefficients, a)) + side.b_coefficient * b
        if side.relation == Relation.ge and lhs < side.rhs - tol:
            return False
        if side.relation == Relation.le and lhs > side.rhs + tol:
            return False
        if side.relation == Relation.eq and abs(lhs - side.rhs) > tol:
            return False
    return True


def finalize(
    p: ProblemInstance,
    rows: Rows,
    loss: LossSpec,
    stage_values: Sequence[float] = (),
    diagnostics: Sequence[RowDiagnostics] = (),
) -> ImputedRegion:
    """Normalize the rows, assemble them with ``S`` and verify the region."""
    imputed = [
        normalize_row(ConstraintRow(a=np.asarray(a, dtype=float).tolist(), b=float(b)),
                      p.normalization)
        for a, b in rows
    ]
    known_set = build_known_set(p.c, p.x0, p.known, p.normalization)
    region = assemble_region(imputed, known_set)
    verification = verify_imputation(region, p.observations, p.c)

    A = np.array([r.a for r in imputed], dtype=float).reshape(-1, p.n)
    b = np.array([r.b for r in imputed], dtype=float)
    scored = loss.losses[-1] if isinstance(loss, CombinedLoss) else loss
    value = evaluate_loss(p, scored, A, b)

    if not verification.all_ok:
        logger.warning("Imputed region for %s failed verification", p.label or loss.kind)
    return ImputedRegion(
        imputed_rows=imputed,
        known_set=known_set,
        loss_kind=loss.kind,
        loss_value=value,
        stage_values=list(stage_values),
        diagnostics=list(diagnostics),
        verification=verification,
    )


def _canonicalize_default(canonicalize: Optional[bool]) -> bool:
    return get_settings().CANONICALIZE_ROWS if canonicalize is None else canonicalize


# ---------------------------------------------------------------------------
# Losses
# ---------------------------------------------------------------------------


def impute_indifference(p: ProblemInstance) -> ImputedRegion:
    """Every row is the normalized cost half-space through x^0."""
    cost_row = half_space_of_cost(p.c, p.x0, p.normalization)
    a, b = np.asarray(cost_row.a), cost_row.b
    rows: Rows = []
    diagnostics = []
    for i in range(p.m1):
        if _satisfies_side(p, i, a, b):
            rows.append((a, b))
            diagnostics.append(RowDiagnostics(row=i, label=f"indifference[{i}]", objective=0.0,
                                              sign=cost_row.sign, shortcut=True))
            continue
        # the closed form breaks a side constraint: any feasible row will do
        solved = solve_row(p, i, lambda builder, row: (LinExpr(), None), f"indifference[{i}]")
        rows.append((solved.a, solved.b))
        diagnostics.append(solved.diagnostics)
    return finalize(p, rows, IndifferenceLoss(), diagnostics=diagnostics)


def impute_adherence(
    p: ProblemInstance,
    loss: AdherenceLoss,
    *,
    canonicalize: Optional[bool] = None,
    joint: bool = False,
) -> ImputedRegion:
    """Rows closest to the prior, one subproblem per row.

    A prior row that already contains every observation, is normalized and
    meets its side constraints is kept unchanged at zero cost.
    """
    if len(loss.prior.rows) != p.m1 or loss.prior.n != p.n:
        raise DimensionMismatchError(
            f"prior must have {p.m1} rows of dimension {p.n}",
            rows=len(loss.prior.rows),
            n=loss.prior.n,
        )
    canonicalize = _canonicalize_default(canonicalize)

    if joint:
        if loss.distance != "l1":
            raise ValueError("joint adherence supports only the l1 distance")
        outcome = solve_stages(p, [loss], get_settings().COMBINED_EPSILON, canonicalize)
        return finalize(p, outcome.rows, loss, outcome.stage_values, outcome.diagnostics)

    quadratic = loss.distance == "l2"
    tol = get_settings().FEASIBILITY_TOL
    X = p.observations.matrix
    rows: Rows = []
    diagnostics = []
    for i, prior_row in enumerate(loss.prior.rows):
        a_hat, b_hat = np.asarray(prior_row.a, dtype=float), float(prior_row.b)
        label = f"adherence[{i}]"
        if (
            np.all(X @ a_hat - b_hat >= -tol)
            and row_is_normalized(prior_row, p.normalization)
            and _satisfies_side(p, i, a_hat, b_hat)
        ):
            rows.append((a_hat, b_hat))
            diagnostics.append(RowDiagnostics(row=i, label=label, objective=0.0, shortcut=True))
            continue

        # zero-weight rows still need a row; distance 1 picks the nearest one
        weight = loss.weight(i) or 1.0
        builder_fn = (adherence_l2_objective if quadratic else adherence_l1_objective)(
            a_hat, b_hat, weight
        )
        solved = solve_row(
            p, i, builder_fn, label, quadratic=quadratic, canonicalize=canonicalize
        )
        rows.append((solved.a, solved.b))
        diagnostics.append(solved.diagnostics)

    return finalize(p, rows, loss, diagnostics=diagnostics)


def impute_adjacency(
    p: ProblemInstance,
    *,
    canonicalize: Optional[bool] = None,
    joint: bool = False,
) -> ImputedRegion:
    """Rows with the smallest total slack; identical subproblems are solved once."""
    canonicalize = _canonicalize_default(canonicalize)
    loss = AdjacencyLoss()
    if joint:
        outcome = solve_stages(p, [loss], get_settings().COMBINED_EPSILON, canonicalize)
        return finalize(p, outcome.rows, loss, outcome.stage_values, outcome.diagnostics)

    objective = adjacency_objective(p)
    rows: Rows = []
    diagnostics = []
    if p.rows_share_constraints:
        solved = solve_row(p, 0, objective, "adjacency[0]", canonicalize=canonicalize)
        for i in range(p.m1):
            rows.append((solved.a.copy(), solved.b))
            diagnostics.append(
                solved.diagnostics.model_copy(update={"row": i, "replicated": i > 0})
            )
    else:
        for i in range(p.m1):
            solved = solve_row(p, i, objective, f"adjacency[{i}]", canonicalize=canonicalize)
            rows.append((solved.a, solved.b))
            diagnostics.append(solved.diagnostics)
    return finalize(p, rows, loss, diagnostics=diagnostics)


def impute_fairness(p: ProblemInstance, *, canonicalize: Optional[bool] = None) -> ImputedRegion:
    """Equal total slack at every observation, as one joint MILP."""
    loss = FairnessLoss()
    outcome = solve_stages(
        p, [loss], get_settings().COMBINED_EPSILON, _canonicalize_default(canonicalize)
    )
    return finalize(p, outcome.rows, loss, outcome.stage_values, outcome.diagnostics)


def impute_compactness(
    p: ProblemInstance, loss: Optional[CompactnessLoss] = None
) -> ImputedRegion:
    """Every observation close to its nearest row, as one big-M MILP.

    Raises:
        BigMTooSmallError: the post-solve audit found a binding big-M
    """
    loss = loss or CompactnessLoss()
    outcome = solve_stages(p, [loss], get_settings().COMBINED_EPSILON, canonicalize=False)
    return finalize(p, outcome.rows, loss, outcome.stage_values, outcome.diagnostics)


def impute_combined(
    p: ProblemInstance, loss: CombinedLoss, *, canonicalize: Optional[bool] = None
) -> ImputedRegion:
    """Solve the stages in order; each optimum is pinned within ``loss.epsilon``."""
    outcome = solve_stages(p, loss.losses, loss.epsilon, _canonicalize_default(canonicalize))
    return finalize(p, outcome.rows, loss, outcome.stage_values, outcome.diagnostics)


def impute(
    p: ProblemInstance, loss: LossSpec, *, canonicalize: Optional[bool] = None
) -> ImputedRegion:
    """Impute ``p.m1`` rows under ``loss`` and verify the assembled region.

    Raises:
        ZeroCostVectorError: c is zero
        AssumptionViolationError: the known set or preferred index is invalid
        InfeasibleImputationError: side constraints leave no feasible row
        SolverLimitError: a subproblem hit the pivot or node cap
    """
    p.check_assumptions()
    logger.info("Imputing %d rows for %s under %s", p.m1, p.label or "instance", loss.kind)
    if isinstance(loss, IndifferenceLoss):
        return impute_indifference(p)
    if isinstance(loss, AdherenceLoss):
        return impute_adherence(p, loss, canonicalize=canonicalize)
    if isinstance(loss, AdjacencyLoss):
        return impute_adjacency(p, canonicalize=canonicalize)
    if isinstance(loss, FairnessLoss):
        return impute_fairness(p, canonicalize=canonicalize)
    if isinstance(loss, CompactnessLoss):
        return impute_compactness(p, loss)
    if isinstance(loss, CombinedLoss):
        return impute_combined(p, loss, canonicalize=canonicalize)
    raise ValueError(f"unknown loss {loss!r}")


def impute_single_point(
    c: Sequence[float],
    x0: Sequence[float],
    known: Optional[Polyhedron],
    m1: int,
    loss: LossSpec,
    normalization: NormalizationScheme = NormalizationScheme.sum_proxy,
) -> ImputedRegion:
    """Single-point inverse optimization: the instance whose only observation is x^0."""
    p = ProblemInstance.build(c, [x0], m1, known=known, normalization=normalization,
                              label="single-point")
    return impute(p, loss)
