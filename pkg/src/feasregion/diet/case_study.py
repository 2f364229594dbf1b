"""Diet recommendations with and without imputed constraints."""

from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from feasregion.contracts.diet import DietDataset, ObjectiveKind
from feasregion.contracts.errors import InternalInconsistencyError
from feasregion.contracts.geometry import Polyhedron
from feasregion.contracts.problem import (
    CombinedLoss,
    CompactnessLoss,
    FairnessLoss,
    ForwardProblem,
    LossSpec,
    ProblemInstance,
)
from feasregion.contracts.reports import CaseStudyReport, FoodComparison
from feasregion.contracts.solver import Relation
from feasregion.engine import LinExpr, ModelBuilder, dot, solve_lp
from feasregion.forward import solve_forward
from feasregion.imputation import impute
from feasregion.util.logging import get_logger

logger = get_logger("diet.case_study")


def avg_l1_distance(points, x) -> float:
    """``(1/K) sum_k ||x^k - x||_1``."""
    points = np.asarray(points, dtype=float)
    x = np.asarray(x, dtype=float)
    if points.ndim != 2 or points.shape[1] != x.shape[0]:
        raise ValueError(f"points of shape {points.shape} do not match x of length {len(x)}")
    return float(np.abs(points - x).sum(axis=1).mean())


def _l1_epigraph(builder: ModelBuilder, x: LinExpr, values: np.ndarray, name: str) -> LinExpr:
    """``t >= sum_k |x - values[k]|`` as one cut per breakpoint interval."""
    t = builder.add_var(name, lower=0.0)
    K = len(values)
    total = float(values.sum())
    below, below_sum = 0, 0.0
    unique, counts = np.unique(values, return_counts=True)
    for value, count in [(None, 0)] + list(zip(unique, counts)):
        if value is not None:
            below += int(count)
            below_sum += float(value) * int(count)
        # on this interval the sum equals (2L - K) x + total - 2 * sum_below
        builder.add_constraint(t - (2 * below - K) * x, Relation.ge, total - 2.0 * below_sum)
    return t


def recommend_diet(region: Polyhedron, c, observations) -> np.ndarray:
    """An optimal point of ``min c'x`` over ``region`` closest to the observations in L1.

    Raises:
        InternalInconsistencyError: the forward problem has no optimum
    """
    c = np.asarray(c, dtype=float)
    X = np.asarray(observations, dtype=float)
    first = solve_forward(ForwardProblem(c=c.tolist(), region=region))
    if not first.is_optimal:
        raise InternalInconsistencyError(
            f"diet forward problem is {first.status.value}", status=first.status.value
        )
    optimum = first.objective_value

    builder = ModelBuilder("diet-tiebreak")
    x = builder.add_vars("x", region.n)
    for i, row in enumerate(region.rows):
        builder.add_constraint(dot(row.a, x), Relation.ge, row.b, name=f"row[{i}]")
    builder.add_constraint(
        dot(c, x), Relation.le, optimum + 1e-9 * max(1.0, abs(optimum)), name="optimal"
    )
    t = [_l1_epigraph(builder, x[j], X[:, j], f"t[{j}]") for j in range(region.n)]
    builder.set_objective(LinExpr.total(t))

    second = solve_lp(builder.build())
    if not second.is_optimal:
        logger.warning("L1 tie-break LP is %s; using the first optimum", second.status.value)
        return np.asarray(first.solution, dtype=float)
    return np.asarray(second.solution[: region.n], dtype=float)


def default_diet_loss() -> CombinedLoss:
    return CombinedLoss(losses=[FairnessLoss(), CompactnessLoss()])


def run_case_study(
    ds: DietDataset,
    m1: int = 30,
    loss: Optional[LossSpec] = None,
    *,
    objective_kind: Optional[ObjectiveKind] = None,
) -> CaseStudyReport:
    """Impute ``m1`` rows and compare diets recommended with and without them."""
    kind = ObjectiveKind(objective_kind or ds.objective_kind)
    loss = loss or default_diet_loss()
    c = ds.cost_vector(kind)
    X = ds.X
    known = ds.known_polyhedron()

    logger.info("Diet case study: %s, %d foods, %d days, m1=%d", kind.value, ds.n, ds.K, m1)
    p = ProblemInstance.build(c.tolist(), X.tolist(), m1, known=known, label=f"diet:{kind.value}")
    imputed = impute(p, loss, canonicalize=False)

    logger.info("Recommending diets")
    without = recommend_diet(known, c, X)
    with_mio = recommend_diet(imputed.region(), c, X)

    observed_mean = X.mean(axis=0)
    comparison = [
        FoodComparison(
            food=food,
            observed_mean=float(observed_mean[j]),
            without_mio=float(without[j]),
            with_mio=float(with_mio[j]),
        )
        for j, food in enumerate(ds.foods)
    ]
    return CaseStudyReport(
        objective_kind=kind.value,
        m1=m1,
        loss_kind=imputed.loss_kind,
        loss_value=imputed.loss_value,
        foods=list(ds.foods),
        preferred_index=p.observations.preferred_index,
        diet_without_mio=without.tolist(),
        diet_with_mio=with_mio.tolist(),
        avg_l1_without=avg_l1_distance(X, without),
        avg_l1_with=avg_l1_distance(X, with_mio),
        comparison=comparison,
        verification=imputed.verification,
        dataset_hash=ds.dataset_hash,
    )


def comparison_frame(report: CaseStudyReport) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in report.comparison])


def export_comparison_csv(report: CaseStudyReport, path: Union[str, Path]) -> None:
    comparison_frame(report).to_csv(path, index=False, float_format="%.6f")
