"""One model over all imputed rows, for losses that couple the rows.

The model holds every row's ``(a_i, b_i)`` with its sign binaries and the
auxiliary structure of each listed loss. Each loss is exposed as a linear
expression so combined stages can switch objectives and pin earlier ones.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from feasregion.config import get_settings
from feasregion.contracts.errors import BigMTooSmallError, InfeasibleImputationError
from feasregion.contracts.problem import (
    AdherenceLoss,
    AdjacencyLoss,
    CompactnessLoss,
    FairnessLoss,
    IndifferenceLoss,
    ProblemInstance,
    SingleLoss,
)
from feasregion.contracts.reports import RowDiagnostics
from feasregion.contracts.solver import Relation, SolverResult, SolveStatus
from feasregion.engine import LinExpr, ModelBuilder, solve
from feasregion.imputation.compactness import (
    compactness_candidates,
    greedy_compactness_rows,
    observation_lower_bounds,
)
from feasregion.imputation.decomposed import check_status
from feasregion.imputation.reduced import (
    Rows,
    SignClasses,
    interchangeable_rows,
    joint_binary_count,
    pooled_compactness,
    solve_fairness_classes,
)
from feasregion.imputation.rowvars import RowVars, add_row_vars
from feasregion.util.logging import get_logger

logger = get_logger("imputation.joint")


def default_big_m(p: ProblemInstance) -> float:
    """``10 * max_k ||x^k||_1 + 10``."""
    return 10.0 * float(np.abs(p.observations.matrix).sum(axis=1).max()) + 10.0


@dataclass
class _Fairness:
    u: list[LinExpr]


@dataclass
class _Compactness:
    nearest: list[LinExpr]
    gamma: list[list[LinExpr]]
    lower_bounds: np.ndarray
    big_m: float


@dataclass
class _Adherence:
    devs: list[list[tuple[LinExpr, float, int]]]


@dataclass
class JointModel:
    """A joint model and the handles needed to read and warm-start it."""

    p: ProblemInstance
    builder: ModelBuilder
    rows: list[RowVars]
    losses: list[SingleLoss]
    expressions: list[LinExpr] = field(default_factory=list)
    structures: list[object] = field(default_factory=list)

    def slack(self, i: int, k: int) -> LinExpr:
        return self.rows[i].slack(self.p.observations.points[k])

    def row_values(self, solution: Sequence[float]) -> Rows:
        return [row.values(solution) for row in self.rows]

    def start_from_rows(self, rows: Rows) -> list[float]:
        """Complete a row assignment to a full start vector for the MILP."""
        x = np.zeros(self.builder.num_vars)
        for rv, (a, b) in zip(self.rows, rows):
            for index, value in rv.start_values(np.asarray(a, dtype=float), b).items():
                x[index] = value

        X = self.p.observations.matrix
        A = np.array([a for a, _ in rows], dtype=float)
        B = np.array([b for _, b in rows], dtype=float)
        D = A @ X.T - B[:, None]

        for structure in self.structures:
            if isinstance(structure, _Fairness):
                totals = D.sum(axis=0)
                for k, u in enumerate(structure.u):
                    x[_index(u)] = abs(totals[k] - totals.mean())
            elif isinstance(structure, _Compactness):
                nearest = D.argmin(axis=0)
                for k, m in enumerate(structure.nearest):
                    x[_index(m)] = max(structure.lower_bounds[k], D[nearest[k], k])
                    for i, g in enumerate(structure.gamma):
                        x[_index(g[k])] = 0.0 if i == nearest[k] else 1.0
            elif isinstance(structure, _Adherence):
                for i, devs in enumerate(structure.devs):
                    values = list(A[i]) + [B[i]]
                    for dev, target, j in devs:
                        x[_index(dev)] = abs(values[j] - target)
        return x.tolist()


def _index(expr: LinExpr) -> int:
    (index,) = expr.terms
    return index


def build_joint_model(
    p: ProblemInstance,
    losses: Sequence[SingleLoss],
    lower_bounds: Optional[np.ndarray] = None,
) -> JointModel:
    """Build the joint model for the listed losses, in order."""
    builder = ModelBuilder(p.label or "joint")
    rows = [add_row_vars(builder, p, i) for i in range(p.m1)]
    jm = JointModel(p=p, builder=builder, rows=rows, losses=list(losses))
    K = p.observations.K

    for t, loss in enumerate(losses):
        tag = f"[{t}]"
        if isinstance(loss, IndifferenceLoss):
            jm.expressions.append(LinExpr())
            jm.structures.append(None)

        elif isinstance(loss, AdjacencyLoss):
            jm.expressions.append(
                LinExpr.total(jm.slack(i, k) for i in range(p.m1) for k in range(K))
            )
            jm.structures.append(None)

        elif isinstance(loss, FairnessLoss):
            totals = [LinExpr.total(jm.slack(i, k) for i in range(p.m1)) for k in range(K)]
            mean = LinExpr.total(totals) * (1.0 / K)
            u = builder.add_vars(f"u{tag}", K, lower=0.0)
            for k in range(K):
                builder.add_constraint(u[k] - totals[k] + mean, Relation.ge, 0.0)
                builder.add_constraint(u[k] + totals[k] - mean, Relation.ge, 0.0)
            jm.expressions.append(LinExpr.total(u))
            jm.structures.append(_Fairness(u))

        elif isinstance(loss, CompactnessLoss):
            if lower_bounds is None:
                lower_bounds = observation_lower_bounds(p)
            big_m = loss.big_m if loss.big_m is not None else default_big_m(p)
            nearest = [
                builder.add_var(f"m{tag}[{k}]", lower=float(lower_bounds[k])) for k in range(K)
            ]
            gamma = [builder.add_vars(f"g{tag}[{i}]", K, binary=True) for i in range(p.m1)]
            for k in range(K):
                for i in range(p.m1):
                    builder.add_constraint(
                        nearest[k] - jm.slack(i, k) + big_m * gamma[i][k], Relation.ge, 0.0
                    )
                builder.add_constraint(
                    LinExpr.total(gamma[i][k] for i in range(p.m1)),
                    Relation.eq,
                    float(p.m1 - 1),
                    name=f"nearest{tag}[{k}]",
                )
            jm.expressions.append(LinExpr.total(nearest))
            jm.structures.append(_Compactness(nearest, gamma, np.asarray(lower_bounds), big_m))

        elif isinstance(loss, AdherenceLoss):
            if loss.distance != "l1":
                raise ValueError("the joint model supports only l1 adherence")
            if len(loss.prior.rows) != p.m1:
                raise ValueError(f"prior has {len(loss.prior.rows)} rows, expected {p.m1}")
            total = LinExpr()
            devs = []
            for i, prior_row in enumerate(loss.prior.rows):
                row = jm.rows[i]
                targets = list(prior_row.a) + [prior_row.b]
                exprs = list(row.a) + [row.b]
                row_devs = []
                for j, (expr, target) in enumerate(zip(exprs, targets)):
                    dev = builder.add_var(f"e{tag}[{i}][{j}]", lower=0.0)
                    builder.add_constraint(dev - expr, Relation.ge, -float(target))
                    builder.add_constraint(dev + expr, Relation.ge, float(target))
                    total.add_inplace(dev, loss.weight(i))
                    row_devs.append((dev, float(target), j))
                devs.append(row_devs)
            jm.expressions.append(total)
            jm.structures.append(_Adherence(devs))

        else:
            raise ValueError(f"loss {type(loss).__name__} cannot be a joint stage")

    return jm


@dataclass
class StagedOutcome:
    rows: Rows
    stage_values: list[float]
    diagnostics: list[RowDiagnostics]


def _diagnostic(label: str, result: SolverResult, objective: float) -> RowDiagnostics:
    return RowDiagnostics(
        label=label,
        objective=objective,
        status=result.status.value,
        iterations=result.iterations,
        node_count=result.node_count,
    )


def _solve_checked(builder: ModelBuilder, label: str, start=None) -> SolverResult:
    result = solve(builder.build(), initial_solution=start)
    if not check_status(result, label):
        raise InfeasibleImputationError(
            f"{label} is infeasible; side constraints contradict the observations",
            subproblem=label,
        )
    return result


def _pin(builder: ModelBuilder, expr: LinExpr, value: float, epsilon: float, name: str) -> None:
    builder.add_constraint(expr, Relation.le, value + epsilon, name=name)


def _greedy_start(jm: JointModel) -> Optional[list[float]]:
    """MILP start from greedy candidate rows; None when rows differ in their constraints."""
    p = jm.p
    if not p.rows_share_constraints:
        return None
    candidates = compactness_candidates(p)
    if not candidates:
        return None
    X = p.observations.matrix
    distances = np.array([X @ a - b for a, b in candidates])
    chosen = greedy_compactness_rows(candidates, distances, p.m1)
    return jm.start_from_rows([candidates[c] for c in chosen])


def _nearest_total(jm: JointModel, solution: Sequence[float]) -> float:
    """``sum_k min_i d_ik`` at the rows of ``solution``."""
    rows = jm.row_values(solution)
    A = np.array([a for a, _ in rows], dtype=float)
    b = np.array([b for _, b in rows], dtype=float)
    D = A @ jm.p.observations.matrix.T - b[:, None]
    return float(D.min(axis=0).sum())


def _tidy_and_audit(
    jm: JointModel, structure: _Compactness, solution: list[float], value: float, label: str,
) -> list[float]:
    """Shrink the relaxed distances with the assignment fixed, then audit big-M.

    Raises:
        BigMTooSmallError: a relaxed distance reaches big-M
    """
    builder = jm.builder.copy()
    for row in jm.rows:
        for binary in row.binaries():
            v = float(round(binary.value(solution)))
            builder.set_bounds(binary, v, v)
    relaxed = []
    for i, gammas in enumerate(structure.gamma):
        for k, g in enumerate(gammas):
            v = float(round(g.value(solution)))
            builder.set_bounds(g, v, v)
            if v > 0.5:
                relaxed.append((i, k))
    # no slack on the stage being tidied: the reported optimum must not drift
    _pin(builder, jm.expressions[-1], value, 0.0, f"pin[{label}]")

    if relaxed:
        builder.set_objective(LinExpr.total(jm.slack(i, k) for i, k in relaxed))
        result = solve(builder.build(), initial_solution=solution)
        if not check_status(result, f"{label}:tidy"):
            logger.debug("%s: tidy re-solve failed; auditing the original solution", label)
        elif _nearest_total(jm, result.solution) > _nearest_total(jm, solution) + 1e-12:
            logger.debug("%s: tidy re-solve raised the loss; keeping the MILP rows", label)
        else:
            solution = result.solution

    worst = max((jm.slack(i, k).value(solution) for i, k in relaxed), default=0.0)
    if worst > structure.big_m - 1e-6:
        X = jm.p.observations.matrix
        D = np.array([[jm.slack(i, k).value(solution) for k in range(len(X))]
                      for i in range(jm.p.m1)])
        raise BigMTooSmallError(
            f"big-M {structure.big_m:g} is binding; increase it",
            big_m=structure.big_m,
            suggested_big_m=2.0 * float(D.max()) + 10.0,
        )
    return solution


def solve_stages(
    p: ProblemInstance,
    losses: Sequence[SingleLoss],
    epsilon: float,
    canonicalize: bool,
) -> StagedOutcome:
    """Solve ``losses`` in order, pinning each optimum before the next stage.

    A first fairness stage over interchangeable rows is solved exactly by
    its sign-class reduction. Compactness stages of models with more than
    ``Settings.JOINT_MAX_BINARIES`` binaries use pooled greedy rows when
    every earlier stage came from that reduction.
    """
    settings = get_settings()
    interchangeable = interchangeable_rows(p)
    binaries = joint_binary_count(p, losses)
    pooled = interchangeable and binaries > settings.JOINT_MAX_BINARIES
    if pooled:
        logger.info(
            "Joint model has %d binaries (limit %d); compactness uses pooled rows",
            binaries, settings.JOINT_MAX_BINARIES,
        )

    lower_bounds = None
    rows: Optional[Rows] = None
    classes: Optional[SignClasses] = None
    stage_values: list[float] = []
    diagnostics: list[RowDiagnostics] = []
    jm: Optional[JointModel] = None
    solution: Optional[list[float]] = None

    for t, loss in enumerate(losses):
        label = f"stage[{t}]:{loss.kind}"
        logger.info("Solving %s (%d rows, %d observations)", label, p.m1, p.observations.K)

        if t == 0 and isinstance(loss, FairnessLoss) and interchangeable:
            classes = solve_fairness_classes(p, tie_break=canonicalize)
            rows, value = classes.rows, classes.value
            diagnostics.extend(classes.diagnostics)
            stage_values.append(value)
            logger.info("%s optimum %.9g (%d positive rows)", label, value, classes.plus)
            continue

        after_classes = t == 0 or (t == 1 and classes is not None)
        if pooled and isinstance(loss, CompactnessLoss) and after_classes:
            rows, value = pooled_compactness(p, classes if t else None)
            diagnostics.append(RowDiagnostics(label=f"{label}:pooled", objective=value,
                                              status="heuristic"))
            stage_values.append(value)
            jm = solution = None
            logger.info("%s pooled value %.9g", label, value)
            continue

        if lower_bounds is None and any(isinstance(s, CompactnessLoss) for s in losses[: t + 1]):
            lower_bounds = observation_lower_bounds(p)
        jm = build_joint_model(p, losses[: t + 1], lower_bounds)
        for s in range(t):
            _pin(jm.builder, jm.expressions[s], stage_values[s], epsilon, f"pin[{s}]")
        jm.builder.set_objective(jm.expressions[t])

        if rows is not None:
            start = jm.start_from_rows(rows)
        elif isinstance(loss, CompactnessLoss):
            start = _greedy_start(jm)
        else:
            start = None

        result = _solve_checked(jm.builder, label, start)
        solution = result.solution
        value = jm.expressions[t].value(solution)
        diagnostics.append(_diagnostic(label, result, value))

        if isinstance(loss, CompactnessLoss):
            solution = _tidy_and_audit(jm, jm.structures[t], solution, value, label)
        stage_values.append(value)
        rows = jm.row_values(solution)
        logger.info("%s optimum %.9g", label, value)

    has_compactness = any(isinstance(loss, CompactnessLoss) for loss in losses)
    if canonicalize and not has_compactness and jm is not None:
        rows, extra = _canonicalize(jm, solution, stage_values[-1], epsilon)
        diagnostics.extend(extra)

    return StagedOutcome(rows=rows, stage_values=stage_values, diagnostics=diagnostics)


def _canonicalize(
    jm: JointModel, solution: list[float], value: float, epsilon: float
) -> tuple[Rows, list[RowDiagnostics]]:
    """Minimise and pin ``a_{i, i mod n}`` row by row among near-optimal solutions.

    A coordinate the normalization leaves unbounded below is skipped and the
    row keeps its current value. An infeasible or capped re-solve stops the
    pass with the rows canonicalized so far.

    Args:
        jm: Joint model of the last stage, with earlier stages already pinned
        solution: Optimal solution of that model
        value: Optimum of the last stage, pinned without slack
        epsilon: Slack on each pinned coordinate

    Returns:
        The canonical rows and one diagnostic per re-solve that succeeded
    """
    builder = jm.builder
    _pin(builder, jm.expressions[-1], value, 0.0, "pin[final]")
    diagnostics = []
    n = jm.p.n
    for i, row in enumerate(jm.rows):
        coordinate = row.a[i % n]
        builder.set_objective(coordinate)
        label = f"canonical[{i}]"
        result = solve(builder.build(), initial_solution=solution)
        if result.status == SolveStatus.unbounded:
            logger.debug("%s is unbounded; row %d keeps its current value", label, i)
            continue
        if result.status != SolveStatus.optimal:
            logger.debug("%s returned %s; keeping current rows", label, result.status.value)
            break
        solution = result.solution
        target = coordinate.value(solution)
        _pin(builder, coordinate, target, epsilon, label)
        diagnostics.append(_diagnostic(label, result, target))
    return jm.row_values(solution), diagnostics
